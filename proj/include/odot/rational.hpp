#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace odot {

struct Error : std::runtime_error {
    explicit Error(const std::string& m) : std::runtime_error(m) {}
};
struct ParseError : Error {
    using Error::Error;
};
struct ValidationError : Error {
    using Error::Error;
};
// Raised when a result would need bar degrees below the session truncation
// (or deformation orders beyond the certified K).
struct TruncationError : Error {
    int needed;
    TruncationError(const std::string& m, int needed_) : Error(m), needed(needed_) {}
};

// Exact ground-field scalar. Default mode is arbitrary-precision rationals;
// a prime field F_p (p odd) can be selected once per session as a
// cross-checking aid. In prime mode values are canonical residues in [0,p).
class Scalar {
  public:
    Scalar() : v_(0) {}
    Scalar(long n) : v_(n) { reduce(); }
    Scalar(long num, long den);
    static Scalar parse(const std::string& tok);  // "num" or "num/den"

    static void set_rational_mode();
    static void set_prime_mode(long p);
    static bool prime_mode();
    static long prime();

    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }

    Scalar operator-() const;
    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const;
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    Scalar& operator/=(const Scalar& o) { return *this = *this / o; }
    bool operator==(const Scalar& o) const { return v_ == o.v_; }
    bool operator!=(const Scalar& o) const { return v_ != o.v_; }
    bool operator<(const Scalar& o) const { return v_ < o.v_; }

    Scalar inverse() const;

    std::string str() const;

  private:
    void reduce();
    mpq_class v_;
};

inline Scalar operator*(long n, const Scalar& s) { return Scalar(n) * s; }

}  // namespace odot
