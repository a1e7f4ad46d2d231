#include "pathloss/cli.hpp"

int main(int argc, char** argv) { return pathloss::cli::run(argc, argv); }
