#include <iostream>

#include "xml2jsp/cli.hpp"

int main(int argc, char** argv)
{
    return xml2jsp::run(argc, argv, std::cout, std::cerr);
}
