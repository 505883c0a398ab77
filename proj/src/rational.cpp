#include "odot/rational.hpp"

namespace odot {

namespace {
bool g_prime_mode = false;
long g_prime = 0;
mpz_class g_prime_z;
}  // namespace

void Scalar::set_rational_mode() {
    g_prime_mode = false;
    g_prime = 0;
}

void Scalar::set_prime_mode(long p) {
    if (p < 3)
        throw ValidationError("prime field characteristic must be an odd prime >= 3");
    mpz_class pz(p);
    if (mpz_probab_prime_p(pz.get_mpz_t(), 40) == 0)
        throw ValidationError("scalar mode: " + std::to_string(p) + " is not prime");
    g_prime_mode = true;
    g_prime = p;
    g_prime_z = pz;
}

bool Scalar::prime_mode() { return g_prime_mode; }
long Scalar::prime() { return g_prime; }

void Scalar::reduce() {
    v_.canonicalize();
    if (!g_prime_mode)
        return;
    // bring num/den to a canonical residue: num * den^{-1} mod p
    mpz_class num = v_.get_num(), den = v_.get_den();
    mpz_class r;
    mpz_mod(r.get_mpz_t(), num.get_mpz_t(), g_prime_z.get_mpz_t());
    if (den != 1) {
        mpz_class dinv;
        if (mpz_invert(dinv.get_mpz_t(), den.get_mpz_t(), g_prime_z.get_mpz_t()) == 0)
            throw ValidationError("denominator not invertible mod p");
        r = (r * dinv) % g_prime_z;
        if (r < 0)
            r += g_prime_z;
    }
    v_ = mpq_class(r);
}

Scalar::Scalar(long num, long den) {
    if (den == 0)
        throw ValidationError("zero denominator");
    v_ = mpq_class(num, den);
    reduce();
}

Scalar Scalar::parse(const std::string& tok) {
    auto slash = tok.find('/');
    try {
        if (slash == std::string::npos) {
            Scalar s;
            s.v_ = mpq_class(mpz_class(tok));
            s.reduce();
            return s;
        }
        mpz_class num(tok.substr(0, slash)), den(tok.substr(slash + 1));
        if (den == 0)
            throw ParseError("zero denominator in '" + tok + "'");
        Scalar s;
        s.v_ = mpq_class(num, den);
        s.reduce();
        return s;
    } catch (const std::invalid_argument&) {
        throw ParseError("bad rational token '" + tok + "'");
    }
}

Scalar Scalar::operator-() const {
    Scalar r;
    r.v_ = -v_;
    r.reduce();
    return r;
}

Scalar Scalar::operator+(const Scalar& o) const {
    Scalar r;
    r.v_ = v_ + o.v_;
    r.reduce();
    return r;
}

Scalar Scalar::operator-(const Scalar& o) const {
    Scalar r;
    r.v_ = v_ - o.v_;
    r.reduce();
    return r;
}

Scalar Scalar::operator*(const Scalar& o) const {
    Scalar r;
    r.v_ = v_ * o.v_;
    r.reduce();
    return r;
}

Scalar Scalar::operator/(const Scalar& o) const { return *this * o.inverse(); }

Scalar Scalar::inverse() const {
    if (is_zero())
        throw ValidationError("division by zero");
    Scalar r;
    if (g_prime_mode) {
        mpz_class inv;
        mpz_class num = v_.get_num();
        if (mpz_invert(inv.get_mpz_t(), num.get_mpz_t(), g_prime_z.get_mpz_t()) == 0)
            throw ValidationError("not invertible mod p");
        r.v_ = mpq_class(inv);
    } else {
        r.v_ = 1 / v_;
    }
    r.reduce();
    return r;
}

std::string Scalar::str() const { return v_.get_str(); }

}  // namespace odot
