#pragma once

// Helpers shared by the model/corpus readers and writers. Reals are written in
// shortest round-trip decimal form, so write -> read -> write is byte-exact.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sbdae/error.hpp"

namespace sbdae::detail {

inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

inline bool parse_double(std::string_view s, double &out) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

template <class Int>
bool parse_int(std::string_view s, Int &out) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

inline std::ifstream open_in(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return in;
}

inline std::ofstream open_out(const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

inline void finish_write(std::ostream &out, const std::filesystem::path &path) {
    out.flush();
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

/// Whitespace-token reader for the versioned model files.
class TokenReader {
public:
    TokenReader(std::istream &in, std::string source) : in_(in), source_(std::move(source)) {}

    std::string word() {
        std::string w;
        if (!(in_ >> w)) fail("unexpected end of file");
        return w;
    }

    void expect(std::string_view keyword) {
        auto w = word();
        if (w != keyword) fail("expected '" + std::string(keyword) + "', got '" + w + "'");
    }

    double real() {
        auto w = word();
        double v;
        if (!parse_double(w, v)) fail("bad real '" + w + "'");
        return v;
    }

    std::size_t count() {
        auto w = word();
        std::size_t v;
        if (!parse_int(w, v)) fail("bad count '" + w + "'");
        return v;
    }

    std::vector<double> reals(std::size_t n) {
        std::vector<double> v(n);
        for (auto &x : v) x = real();
        return v;
    }

    void expect_end() {
        std::string w;
        if (in_ >> w) fail("trailing content '" + w + "'");
    }

    [[noreturn]] void fail(const std::string &what) const {
        throw ParseError(source_ + ": " + what, 0);
    }

private:
    std::istream &in_;
    std::string source_;
};

inline void write_reals(std::ostream &out, std::span<const double> v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out << ' ';
        out << format_double(v[i]);
    }
    out << '\n';
}

}  // namespace sbdae::detail
