#include "app.hpp"

int main(int argc, char** argv) { return ness::app::main_entry(argc, argv); }
