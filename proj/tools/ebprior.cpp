#include "ebprior/cli/app.hpp"

int main(int argc, char** argv) { return ebprior::cli::run(argc, argv); }
