#include "fairmatch/rational.hpp"

#include <cctype>

#include "fairmatch/errors.hpp"

namespace fairmatch {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);

    bool negative = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }

    std::string_view num = s, den = "1";
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        num = s.substr(0, slash);
        den = s.substr(slash + 1);
    }
    if (!all_digits(num) || !all_digits(den))
        throw ParseError("not a rational: '" + std::string(text) + "' (expected [-]num[/den])");

    boost::multiprecision::mpz_int n{std::string(num)};
    boost::multiprecision::mpz_int d{std::string(den)};
    if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    Rational r(n, d);  // canonicalizes
    return negative ? Rational(-r) : r;
}

std::string fraction_string(const Rational& value) {
    return numerator(value).str() + "/" + denominator(value).str();
}

Rational dot(const RatVec& a, const RatVec& b) {
    if (a.size() != b.size()) throw DimensionMismatch("dot: length mismatch");
    Rational acc = 0;
    for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
    return acc;
}

Rational vec_sum(const RatVec& v) {
    Rational acc = 0;
    for (const auto& e : v) acc += e;
    return acc;
}

Rational vec_max(const RatVec& v) {
    if (v.empty()) throw DimensionMismatch("vec_max: empty vector");
    Rational best = v.front();
    for (const auto& e : v)
        if (e > best) best = e;
    return best;
}

Rational vec_min(const RatVec& v) {
    if (v.empty()) throw DimensionMismatch("vec_min: empty vector");
    Rational best = v.front();
    for (const auto& e : v)
        if (e < best) best = e;
    return best;
}

RatVec rat_vec(std::initializer_list<long> ints) {
    RatVec v;
    v.reserve(ints.size());
    for (long i : ints) v.emplace_back(i);
    return v;
}

RatMat rat_mat(std::initializer_list<std::initializer_list<long>> ints) {
    RatMat m;
    m.reserve(ints.size());
    for (const auto& row : ints) m.push_back(rat_vec(row));
    return m;
}

}  // namespace fairmatch
