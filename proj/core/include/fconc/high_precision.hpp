#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace fconc {

/// 50 significant decimal digits; used to re-verify witnesses found in double.
using HighPrecision = boost::multiprecision::cpp_bin_float_50;

}  // namespace fconc
