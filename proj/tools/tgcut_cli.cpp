#include "tgcut/cli.hpp"

int main(int argc, char** argv) { return tgcut::run_cli(argc, argv); }
