#include "aglab/cli.hpp"

int main(int argc, char** argv) { return aglab::run(argc, argv); }
