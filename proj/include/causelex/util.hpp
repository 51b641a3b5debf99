#ifndef CAUSELEX_UTIL_HPP
#define CAUSELEX_UTIL_HPP

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

namespace causelex {

inline std::string to_lower(const std::string& s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

inline std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

inline std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

inline std::string join(const std::vector<std::string>& toks, const std::string& sep = " ") {
    std::string out;
    for (size_t i = 0; i < toks.size(); ++i) {
        if (i) out += sep;
        out += toks[i];
    }
    return out;
}

// FNV-1a, used for config hashes in output headers.
inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

constexpr const char* kToolVersion = "0.1.0";

inline std::string output_header(const std::string& config_text) {
    std::ostringstream os;
    os << "# causelex " << kToolVersion << " config=" << std::hex << fnv1a(config_text);
    return os.str();
}

}  // namespace causelex

#endif
