#include <cstdio>
int main(){ std::puts("rlab cli placeholder"); return 0; }
