#include "cli.hpp"

int main(int argc, char** argv)
{
    return hermfactor::cli::run(argc, argv, std::cout, std::cerr);
}
