#pragma once

#include <string>
#include <vector>

#include "odot/sparse.hpp"

namespace odot {

// Element of V^{otimes k}, stored sparsely over multi-indices encoded in
// base dim (slot 0 is the most significant digit).
struct Tensor {
    int arity = 1;
    SparseVec t;
    bool operator==(const Tensor& o) const { return arity == o.arity && t == o.t; }
};

struct CheckReport {
    bool pass = true;
    std::string detail;  // first failing identity, with indices
};

// Finite-dimensional Drinfel'd algebra (V, ., Delta, eps, Phi) by structure
// constants, plus the splitting V = Vbar + k.1 used by the bar resolution.
class Drinfeld {
  public:
    int dim = 0;
    std::vector<std::string> names;
    SparseVec unit;                        // coordinates of 1 in V
    std::vector<std::vector<SparseVec>> mult;  // mult[i][j] = e_i . e_j in V
    std::vector<Tensor> comul;             // comul[i] = Delta(e_i) in V^{x2}
    std::vector<Scalar> counit;            // eps(e_i)
    Tensor phi, phi_inv;                   // in V^{x3}
    std::vector<SparseVec> vbar;           // echelon basis of Ker(eps), V coords
    bool phi_counital = false;             // (id x eps x id)(Phi) == 1x1; informational

    // --- scalars/vectors in V ---
    Scalar eps(const SparseVec& v) const;
    SparseVec mul(const SparseVec& a, const SparseVec& b) const;
    SparseVec pi(const SparseVec& v) const;  // v - eps(v).1, the projection onto Vbar
    // coordinates of an element of Ker(eps) in the vbar basis
    SparseVec vbar_coords(const SparseVec& v) const;
    SparseVec vbar_vec(int k) const { return vbar[(size_t)k]; }
    int vbar_dim() const { return (int)vbar.size(); }

    // --- tensor calculus on V^{xk} ---
    int tdim(int arity) const;
    long tencode(const std::vector<int>& idx) const;
    std::vector<int> tdecode(long code, int arity) const;
    Tensor tensor_unit(int arity) const;           // 1 x ... x 1
    Tensor tmul(const Tensor& a, const Tensor& b) const;  // componentwise product
    Tensor apply_delta(const Tensor& a, int slot) const;  // arity k -> k+1
    Tensor apply_eps(const Tensor& a, int slot) const;    // arity k -> k-1
    Tensor pad(const Tensor& a, int left, int right) const;  // 1^l x a x 1^r

    // --- checkers ---
    CheckReport check_bialgebra() const;
    CheckReport check_quasi_coassoc() const;
    CheckReport check_pentagon() const;

    // Phi^{-1} via solve on the left-multiplication matrix of V^{x3};
    // throws naming the singular rank when Phi is not invertible.
    Tensor invert_phi(const Tensor& p) const;

    // Computes vbar + phi_inv + the informational counital flag; call once
    // after the structure constants are filled in.
    void finalize();

    bool phi_is_trivial() const;
};

// Fixture algebras used across the test suites.
Drinfeld make_dim1();
Drinfeld make_e2(int which_phi);  // 0: Phi0 = 1x1x1, 1: Phi1, 2: broken pentagon
Drinfeld make_z3();               // group algebra of Z/3, Phi0

}  // namespace odot
