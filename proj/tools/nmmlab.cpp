#include "nmm/cli.hpp"

int main(int argc, char** argv)
{
    return nmm::cli::main(argc, argv);
}
