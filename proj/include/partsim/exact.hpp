#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace partsim {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

/// 50 decimal digits; the enumeration oracle promises >= 30 correct digits and
/// this leaves headroom for the few thousand operations a mean accumulates.
using HighFloat = boost::multiprecision::cpp_bin_float_50;

}  // namespace partsim
