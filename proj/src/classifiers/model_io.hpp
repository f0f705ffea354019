#ifndef AEP_SRC_MODEL_IO_HPP
#define AEP_SRC_MODEL_IO_HPP

#include <bit>
#include <charconv>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "aep/error.hpp"
#include "aep/matrix.hpp"

namespace aep::models::io {

// Model files are whitespace-separated `key value...` tokens. Doubles are
// written as their 64-bit pattern in hex so round-trips are exact.

inline std::string f64_to_hex(double v) {
    char buf[17];
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    static const char* digits = "0123456789abcdef";
    for (int i = 0; i < 16; ++i) buf[15 - i] = digits[(bits >> (4 * i)) & 0xf];
    buf[16] = '\0';
    return std::string(buf);
}

inline double hex_to_f64(const std::string& s) {
    if (s.size() != 16) fail(Errc::parse_error, "bad double token '" + s + "'");
    std::uint64_t bits = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), bits, 16);
    if (ec != std::errc() || ptr != s.data() + s.size())
        fail(Errc::parse_error, "bad double token '" + s + "'");
    return std::bit_cast<double>(bits);
}

inline void write_kv(std::ostream& out, const char* key, std::uint64_t v) {
    out << key << ' ' << v << '\n';
}

inline void write_kv(std::ostream& out, const char* key, const std::string& v) {
    out << key << ' ' << v << '\n';
}

inline void write_kv(std::ostream& out, const char* key, double v) {
    out << key << ' ' << f64_to_hex(v) << '\n';
}

inline void write_vec(std::ostream& out, const char* key, const std::vector<double>& v) {
    out << key << ' ' << v.size();
    for (double x : v) out << ' ' << f64_to_hex(x);
    out << '\n';
}

inline void write_matrix(std::ostream& out, const char* key, const Matrix& m) {
    out << key << ' ' << m.rows << ' ' << m.cols;
    for (double x : m.data) out << ' ' << f64_to_hex(x);
    out << '\n';
}

struct Reader {
    std::istream& in;

    std::string token() {
        std::string t;
        if (!(in >> t)) fail(Errc::parse_error, "unexpected end of model file");
        return t;
    }

    void expect(const std::string& key) {
        const std::string t = token();
        if (t != key) fail(Errc::parse_error, "expected '" + key + "', found '" + t + "'");
    }

    std::uint64_t u64(const std::string& key) {
        expect(key);
        return u64_value();
    }

    std::uint64_t u64_value() {
        const std::string t = token();
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || ptr != t.data() + t.size())
            fail(Errc::parse_error, "bad integer token '" + t + "'");
        return v;
    }

    double f64(const std::string& key) {
        expect(key);
        return hex_to_f64(token());
    }

    std::string str(const std::string& key) {
        expect(key);
        return token();
    }

    std::vector<double> vec(const std::string& key) {
        expect(key);
        const std::uint64_t n = u64_value();
        std::vector<double> out(n);
        for (auto& x : out) x = hex_to_f64(token());
        return out;
    }

    Matrix matrix(const std::string& key) {
        expect(key);
        const std::uint64_t rows = u64_value();
        const std::uint64_t cols = u64_value();
        Matrix m(rows, cols);
        for (auto& x : m.data) x = hex_to_f64(token());
        return m;
    }
};

} // namespace aep::models::io

#endif
