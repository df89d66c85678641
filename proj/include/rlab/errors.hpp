#pragma once

#include <stdexcept>
#include <string>

namespace rlab {

struct ResolutionTooCoarse : std::runtime_error {
  explicit ResolutionTooCoarse(const std::string& msg) : std::runtime_error("ResolutionTooCoarse: " + msg) {}
};
struct GridMismatch : std::runtime_error {
  explicit GridMismatch(const std::string& msg) : std::runtime_error("GridMismatch: " + msg) {}
};
struct ScaleOrderViolation : std::runtime_error {
  explicit ScaleOrderViolation(const std::string& msg) : std::runtime_error("ScaleOrderViolation: " + msg) {}
};
struct SupportViolation : std::runtime_error {
  explicit SupportViolation(const std::string& msg) : std::runtime_error("SupportViolation: " + msg) {}
};
struct BisectFailed : std::runtime_error {
  int round = -1;
  BisectFailed(const std::string& msg, int round_index = -1)
      : std::runtime_error("BisectFailed: " + msg), round(round_index) {}
};
struct DegenerateAfterPerturbation : std::runtime_error {
  explicit DegenerateAfterPerturbation(const std::string& msg)
      : std::runtime_error("DegenerateAfterPerturbation: " + msg) {}
};
struct NotOnVariety : std::runtime_error {
  explicit NotOnVariety(const std::string& msg) : std::runtime_error("NotOnVariety: " + msg) {}
};
struct DegeneratePoint : std::runtime_error {
  explicit DegeneratePoint(const std::string& msg) : std::runtime_error("DegeneratePoint: " + msg) {}
};
struct SamplerFailure : std::runtime_error {
  explicit SamplerFailure(const std::string& msg) : std::runtime_error("SamplerFailure: " + msg) {}
};
struct SearchBudgetExceeded : std::runtime_error {
  explicit SearchBudgetExceeded(const std::string& msg)
      : std::runtime_error("SearchBudgetExceeded: " + msg) {}
};
struct EmptyPacketSet : std::runtime_error {
  explicit EmptyPacketSet(const std::string& msg) : std::runtime_error("EmptyPacketSet: " + msg) {}
};
struct CombinatorialBlowup : std::runtime_error {
  explicit CombinatorialBlowup(const std::string& msg) : std::runtime_error("CombinatorialBlowup: " + msg) {}
};
struct ExponentRelationViolated : std::runtime_error {
  explicit ExponentRelationViolated(const std::string& msg)
      : std::runtime_error("ExponentRelationViolated: " + msg) {}
};
struct NotOnQuadric : std::runtime_error {
  explicit NotOnQuadric(const std::string& msg) : std::runtime_error("NotOnQuadric: " + msg) {}
};
struct ScaleInfeasible : std::runtime_error {
  explicit ScaleInfeasible(const std::string& msg) : std::runtime_error("ScaleInfeasible: " + msg) {}
};

}  // namespace rlab
