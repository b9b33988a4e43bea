#include <iostream>

#include "sdmce/logging.hpp"
#include "sdmce_tools/cli.hpp"

int main(int argc, char** argv)
{
    sdmce::log::init_from_env();
    return sdmce::cli::run(argc, argv, std::cout, std::cerr);
}
