#pragma once

#include <fstream>
#include <sstream>
#include <string>

inline std::string data_path(const std::string& name) { return std::string(AISINMACA_DATA_DIR) + "/" + name; }

inline std::string read_fixture(const std::string& name) {
    std::ifstream in(data_path(name), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}
