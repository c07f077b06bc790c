#include <cstdio>
int main(){ std::puts("altrel"); }
