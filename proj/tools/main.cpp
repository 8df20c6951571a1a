#include "jpa/commands.hpp"

int main(int argc, char** argv) { return jpa::run_cli(argc, argv); }
