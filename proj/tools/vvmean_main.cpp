#include "vvmean/harness.hpp"

int main(int argc, char** argv) { return vvmean::run_cli(argc, argv); }
