#include <iostream>
int main() { std::cout << "qp: pipeline CLI (under construction)\n"; return 1; }
