#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace majda::detail {

/// Whitespace-separated (x, y) rows; '#' starts a comment, blank lines skip.
inline std::pair<std::vector<double>, std::vector<double>> read_two_columns(const std::filesystem::path& path,
                                                                            const std::string& what)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + what + " '" + path.string() + "'");
    }
    std::vector<double> xs;
    std::vector<double> ys;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream row(line);
        double x = 0.0;
        double y = 0.0;
        if (!(row >> x)) {
            continue;
        }
        if (!(row >> y)) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": expected two columns in " +
                                     what);
        }
        xs.push_back(x);
        ys.push_back(y);
    }
    return {std::move(xs), std::move(ys)};
}

}  // namespace majda::detail
