#include "twistlab/harness.hpp"

int main(int argc, char** argv) { return twistlab::run_cli(argc, argv); }
