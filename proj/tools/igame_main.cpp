#include "igame/workbench.hpp"

int main(int argc, char** argv) { return igame::cli::run(argc, argv); }
