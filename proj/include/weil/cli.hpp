#pragma once

#include "weil/serialize.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace weil {

enum ExitCode { kOk = 0, kInvariant = 1, kValidation = 2, kCap = 3 };

struct Request {
    std::string command;  // discform, jordan, milgram, rho, gauss, kernel, verify
    std::string lattice;  // inline JSON or a file path
    std::optional<SL2Z> matrix;
    int eps = 1;
    std::optional<long long> prime, a, c;
    unsigned precision = 64;
    std::string format = "both";  // exact, numeric, both
    bool pretty = false;
};

struct Response {
    Json doc;
    int exit_code = kOk;
};

// "a,b,c,d" or JSON [[a,b],[c,d]]
SL2Z parse_matrix(const std::string& text);

Response run(const Request& req);
std::string render_pretty(const Json& doc);
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace weil
