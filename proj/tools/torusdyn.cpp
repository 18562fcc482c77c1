#include <cstdio>
int main() { std::puts("torusdyn placeholder"); return 0; }
