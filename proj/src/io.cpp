#include "fmpd/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

namespace fmpd {

namespace {

struct Token {
    std::string_view text;
    int line;
};

// Splits into whitespace-separated tokens, dropping '#' comment lines.
std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> tokens;
    int line = 1;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (c == '\n') {
            ++line;
            ++i;
        } else if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
        } else if (c == '#') {
            while (i < text.size() && text[i] != '\n') ++i;
        } else {
            const std::size_t start = i;
            while (i < text.size() && text[i] != ' ' && text[i] != '\t' && text[i] != '\r' &&
                   text[i] != '\n')
                ++i;
            tokens.push_back({text.substr(start, i - start), line});
        }
    }
    return tokens;
}

int last_line(const std::vector<Token>& tokens) {
    return tokens.empty() ? 1 : tokens.back().line;
}

double parse_value(const Token& tok) {
    double v = 0;
    const char* first = tok.text.data();
    const char* last = first + tok.text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec == std::errc::result_out_of_range || (ec == std::errc{} && !std::isfinite(v)))
        throw ParseError(tok.line, "non-finite value '" + std::string(tok.text) + "'");
    if (ec != std::errc{} || ptr != last)
        throw ParseError(tok.line, "malformed value '" + std::string(tok.text) + "'");
    return v;
}

std::uint64_t parse_uint(const Token& tok, const char* what) {
    std::uint64_t v = 0;
    const char* first = tok.text.data();
    const char* last = first + tok.text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        throw ParseError(tok.line, std::string("malformed ") + what + " '" +
                                       std::string(tok.text) + "'");
    return v;
}

std::string shortest(double v) {
    char buf[40];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

int header_n(const Token& tok) {
    const std::uint64_t n = parse_uint(tok, "variable count");
    if (n < 1) throw ParseError(tok.line, "variable count must be >= 1");
    if (n > static_cast<std::uint64_t>(max_vars()))
        throw ResourceLimitError("variable count " + std::to_string(n) +
                                 " exceeds dense limit " + std::to_string(max_vars()));
    return static_cast<int>(n);
}

} // namespace

MultilinearPoly parse_poly(std::string_view text) {
    const std::vector<Token> tokens = tokenize(text);
    if (tokens.size() < 3) throw ParseError(last_line(tokens), "malformed header: expected 'MLP1 <dense|sparse> <n> [count]'");
    if (tokens[0].text != "MLP1")
        throw ParseError(tokens[0].line, "malformed header: bad magic '" +
                                             std::string(tokens[0].text) + "', expected MLP1");
    const std::string_view kind = tokens[1].text;
    if (kind != "dense" && kind != "sparse")
        throw ParseError(tokens[1].line, "malformed header: unknown kind '" + std::string(kind) + "'");
    const int n = header_n(tokens[2]);
    const std::size_t size = std::size_t{1} << n;

    std::vector<double> coeffs;
    if (kind == "dense") {
        const std::size_t body = 3;
        if (tokens.size() - body > size)
            throw ParseError(tokens[body + size].line, "wrong count: expected exactly " +
                                                           std::to_string(size) + " values");
        if (tokens.size() - body < size)
            throw ParseError(last_line(tokens), "wrong count: expected " + std::to_string(size) +
                                                    " values, got " +
                                                    std::to_string(tokens.size() - body));
        coeffs.resize(size);
        for (std::size_t i = 0; i < size; ++i) coeffs[i] = parse_value(tokens[body + i]);
    } else {
        if (tokens.size() < 4)
            throw ParseError(last_line(tokens), "malformed header: sparse needs an entry count");
        const std::uint64_t count = parse_uint(tokens[3], "entry count");
        if (tokens.size() - 4 != count * 2)
            throw ParseError(last_line(tokens),
                             "wrong count: expected " + std::to_string(count) +
                                 " '<index> <value>' entries, got " +
                                 std::to_string((tokens.size() - 4) / 2));
        coeffs.assign(size, 0.0);
        std::uint64_t prev = 0;
        bool have_prev = false;
        for (std::uint64_t e = 0; e < count; ++e) {
            const Token& itok = tokens[4 + 2 * e];
            const std::uint64_t idx = parse_uint(itok, "index");
            if (idx >= size)
                throw ParseError(itok.line, "index " + std::to_string(idx) + " out of range for n=" +
                                                std::to_string(n));
            if (have_prev && idx == prev)
                throw ParseError(itok.line, "duplicate index " + std::to_string(idx));
            if (have_prev && idx < prev)
                throw ParseError(itok.line, "indices must be strictly increasing");
            coeffs[idx] = parse_value(tokens[4 + 2 * e + 1]);
            prev = idx;
            have_prev = true;
        }
    }
    return MultilinearPoly(n, std::move(coeffs));
}

std::string serialize_poly(const MultilinearPoly& poly, PolyFileKind kind) {
    std::ostringstream os;
    if (kind == PolyFileKind::dense) {
        os << "MLP1 dense " << poly.n() << "\n";
        for (std::size_t i = 0; i < poly.size(); ++i) {
            if (i) os << ' ';
            os << shortest(poly.coeff(i));
        }
        os << "\n";
    } else {
        std::vector<std::size_t> nonzero;
        for (std::size_t i = 0; i < poly.size(); ++i)
            if (poly.coeff(i) != 0.0) nonzero.push_back(i);
        os << "MLP1 sparse " << poly.n() << " " << nonzero.size() << "\n";
        for (std::size_t i : nonzero) os << i << " " << shortest(poly.coeff(i)) << "\n";
    }
    return os.str();
}

EvalPoint parse_point(std::string_view text) {
    const std::vector<Token> tokens = tokenize(text);
    if (tokens.size() < 2) throw ParseError(last_line(tokens), "malformed header: expected 'PNT1 <n>'");
    if (tokens[0].text != "PNT1")
        throw ParseError(tokens[0].line, "malformed header: bad magic '" +
                                             std::string(tokens[0].text) + "', expected PNT1");
    const int n = header_n(tokens[1]);
    if (tokens.size() - 2 != static_cast<std::size_t>(n))
        throw ParseError(last_line(tokens), "wrong count: expected " + std::to_string(n) +
                                                " coordinates, got " +
                                                std::to_string(tokens.size() - 2));
    EvalPoint x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = parse_value(tokens[2 + i]);
    return x;
}

std::string serialize_point(const EvalPoint& x) {
    std::ostringstream os;
    os << "PNT1 " << x.size() << "\n";
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) os << ' ';
        os << shortest(x[i]);
    }
    os << "\n";
    return os.str();
}

namespace {
std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}
} // namespace

MultilinearPoly load_poly_file(const std::string& path) { return parse_poly(read_file(path)); }

EvalPoint load_point_file(const std::string& path) { return parse_point(read_file(path)); }

std::pair<MultilinearPoly, EvalPoint> random_instance(int n, const InstanceSpec& spec) {
    if (n < 1) throw std::invalid_argument("random_instance: n must be >= 1");
    if (spec.coeff_hi < spec.coeff_lo || spec.point_hi < spec.point_lo)
        throw std::invalid_argument("random_instance: empty range");
    const double bound = std::max(std::abs(spec.point_lo), std::abs(spec.point_hi));
    if (spec.point_deadzone > 0 && spec.point_deadzone >= bound)
        throw std::invalid_argument("random_instance: deadzone swallows the point range");
    if (spec.zero_coords < 0 || spec.zero_coords > n)
        throw std::invalid_argument("random_instance: bad zero_coords");

    std::mt19937_64 eng(spec.seed);
    auto unit = [&eng]() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; };

    std::vector<double> coeffs(std::size_t{1} << n);
    for (double& c : coeffs) c = spec.coeff_lo + unit() * (spec.coeff_hi - spec.coeff_lo);

    EvalPoint x(static_cast<std::size_t>(n));
    for (double& v : x) {
        do {
            v = spec.point_lo + unit() * (spec.point_hi - spec.point_lo);
        } while (std::abs(v) < spec.point_deadzone);
    }

    for (int placed = 0; placed < spec.zero_coords;) {
        const std::size_t k = static_cast<std::size_t>(eng() % static_cast<std::uint64_t>(n));
        if (x[k] == 0.0) continue;
        x[k] = 0.0;
        ++placed;
    }
    return {MultilinearPoly(n, std::move(coeffs)), std::move(x)};
}

std::uint64_t instance_hash(const MultilinearPoly& poly, const EvalPoint& x) {
    std::uint64_t h = 14695981039346656037ull;
    auto mix = [&h](double v) {
        std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
        for (int i = 0; i < 8; ++i) {
            h ^= (bits >> (8 * i)) & 0xff;
            h *= 1099511628211ull;
        }
    };
    for (double c : poly.coeffs()) mix(c);
    for (double v : x) mix(v);
    return h;
}

} // namespace fmpd
