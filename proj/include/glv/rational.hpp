#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>
#include <sstream>
#include <stdexcept>
#include <string>

namespace glv {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::rational<BigInt>;

inline Rational rat(long num, long den = 1) { return Rational(BigInt(num), BigInt(den)); }

inline std::string to_string(const Rational& r) {
    std::ostringstream os;
    if (r.denominator() == 1)
        os << r.numerator();
    else
        os << r.numerator() << '/' << r.denominator();
    return os.str();
}

// Accepts "3", "-3", "2/5".
inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(s), 1);
        BigInt num(s.substr(0, slash));
        BigInt den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rational(num, den);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad rational literal: " + s);
    }
}

}  // namespace glv
