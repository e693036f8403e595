#include "cli/app.hpp"

int main(int argc, char** argv) { return pathbs::cli::run(argc, argv); }
