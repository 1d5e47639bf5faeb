#include "summinc/cli.hpp"

int main(int argc, char** argv) { return summinc::run_cli(argc, argv); }
