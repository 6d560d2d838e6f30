#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace fairmatch {

/// Exact arbitrary-precision rational. Values are always canonical:
/// lowest terms, positive denominator. All arithmetic is exact.
using Rational = boost::multiprecision::mpq_rational;

using RatVec = std::vector<Rational>;
using RatMat = std::vector<RatVec>;

/// Parses "3", "-7/4" or "+2/6" (canonicalized to "1/3").
/// Floating-point syntax is rejected; the ingest path never rounds.
Rational parse_rational(std::string_view text);

/// Serializes as "num/den" with the denominator always spelled out,
/// e.g. "3/1", "-7/4". Inverse of parse_rational.
std::string fraction_string(const Rational& value);

Rational dot(const RatVec& a, const RatVec& b);
Rational vec_sum(const RatVec& v);
Rational vec_max(const RatVec& v);
Rational vec_min(const RatVec& v);

RatVec rat_vec(std::initializer_list<long> ints);
RatMat rat_mat(std::initializer_list<std::initializer_list<long>> ints);

}  // namespace fairmatch
