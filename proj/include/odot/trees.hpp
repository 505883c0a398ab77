#pragma once

#include <map>
#include <string>
#include <vector>

#include "odot/rational.hpp"

namespace odot {

// Planar rooted tree in preorder encoding: entry = number of children,
// 0 = leaf. A bare leaf [0] is the arity-1 operad unit; cells of the
// associahedron K_n are trees with n leaves and all vertex arities >= 2.
struct Tree {
    std::vector<int> code;

    bool operator<(const Tree& o) const { return code < o.code; }
    bool operator==(const Tree& o) const { return code == o.code; }

    bool is_leaf() const { return code.size() == 1 && code[0] == 0; }
    int leaf_count() const;
    int vertex_count() const;
    int degree() const;  // sum of (arity - 2) over vertices = cell dimension
    bool is_binary() const;
    bool is_corolla() const;
    std::string str() const;  // bracketing picture, e.g. ((**)*)
};

Tree leaf_tree();
Tree corolla(int arity);

// Grafts u onto the t-th leaf (1-based) of v.
Tree graft(const Tree& u, const Tree& v, int t);

// Sum of cell dimensions of the vertices of v visited strictly before
// leaf t in planar preorder; the Koszul weight picked up by a graft there.
int degree_before_leaf(const Tree& v, int t);

// All full bracketings of n symbols (binary trees), left-heavy first;
// count = Catalan(n-1).
std::vector<Tree> enumerate_bracketings(int n);

// All i-dimensional cells of K_n, n >= 2, 0 <= i <= n-2.
std::vector<Tree> enumerate_cells(int n, int i);

// All cells of K_n in one deterministic list.
std::vector<Tree> all_cells(int n);

// Homogeneous chain of decorated trees: a vertex of arity k+2 is the
// generator e_k. Grading = cell dimension.
struct TreeChain {
    int arity = 0;
    int degree = 0;
    std::map<Tree, Scalar> c;

    TreeChain() = default;
    TreeChain(int arity_, int degree_) : arity(arity_), degree(degree_) {}
    bool is_zero() const { return c.empty(); }
    void add(const Tree& t, const Scalar& s);
    TreeChain scaled(const Scalar& s) const;
    TreeChain operator+(const TreeChain& o) const;
    TreeChain operator-(const TreeChain& o) const;
    bool operator==(const TreeChain& o) const;
};

TreeChain e_gen(int n);  // e_n = the corolla of arity n+2, degree n

// s o_i t: graft s into leaf i of t, Koszul sign from the planar
// depth-first vertex order weighted by cell dimensions.
TreeChain graft_oi(const TreeChain& s, const TreeChain& t, int i);

// Cellular differential: Eq-(7)-style value on generators, extended as a
// degree -1 derivation of every o_i.
TreeChain d_C(const TreeChain& t);
TreeChain d_C_gen(int m);  // d_C(e_m)

// phi<>psi = sum_i (-1)^{(a+1)(i+q+1)} phi o_i psi, and the induced dg Lie
// bracket with exponent (a+p+1)(b+q+1).
TreeChain diamond(const TreeChain& phi, const TreeChain& psi);
TreeChain lie_bracket(const TreeChain& phi, const TreeChain& psi);

// Total substitution gamma(phi; nu_1..nu_a) = nu_1 o_1 (nu_2 o_2 (... (nu_a o_a phi))),
// with the leaf tree acting as the operad unit.
TreeChain gamma(const TreeChain& phi, const std::vector<TreeChain>& nus);

struct CompAxiomReport {
    bool pass = true;
    int case_id = 0;  // 1: i<=j-1, 2: j<=i<=b+j-1, 3: i>=j+b
    std::string detail;
};

// Verifies the applicable case of the comp-algebra axiom for
// phi o_i (psi o_j nu) in CC(K).
CompAxiomReport check_comp_axioms(const TreeChain& phi, const TreeChain& psi,
                                  const TreeChain& nu, int i, int j);

// Unique extension of e_n |-> images[n] to a comp-algebra map out of the
// free dg comp algebra CC(K). The handle must provide:
//   Elem, oi(Elem,int,Elem), add, scale, zero(arity,degree), image_ok(n,Elem)
template <class Handle>
class FreeExtend {
  public:
    FreeExtend(Handle& h, std::map<int, typename Handle::Elem> images)
        : h_(h), images_(std::move(images)) {
        for (auto& [n, el] : images_)
            if (!h_.image_ok(n, el))
                throw ValidationError("free_extend: image of e_" + std::to_string(n) +
                                      " has wrong grading");
    }

    typename Handle::Elem eval_tree(const Tree& T) {
        auto it = memo_.find(T);
        if (it != memo_.end())
            return it->second;
        typename Handle::Elem r = eval_tree_uncached(T);
        memo_.emplace(T, r);
        return r;
    }

    typename Handle::Elem eval(const TreeChain& ch) {
        typename Handle::Elem acc = h_.zero(ch.arity, ch.degree);
        for (auto& [T, s] : ch.c)
            acc = h_.add(acc, h_.scale(eval_tree(T), s));
        return acc;
    }

  private:
    typename Handle::Elem eval_tree_uncached(const Tree& T) {
        if (T.is_leaf())
            throw ValidationError("free_extend: bare leaf has no image");
        if (T.is_corolla()) {
            int n = T.leaf_count() - 2;
            auto it = images_.find(n);
            if (it == images_.end())
                throw ValidationError("free_extend: no image for e_" + std::to_string(n));
            return it->second;
        }
        // peel the first non-leaf child S of the root: T = sigma * (S o_t R)
        int k = T.code[0];
        size_t pos = 1;
        int leaves_before = 0;
        for (int c = 0; c < k; ++c) {
            size_t end = subtree_end(T.code, pos);
            if (T.code[pos] != 0) {
                Tree S{std::vector<int>(T.code.begin() + (long)pos, T.code.begin() + (long)end)};
                Tree R = T;
                R.code.erase(R.code.begin() + (long)pos, R.code.begin() + (long)end);
                R.code.insert(R.code.begin() + (long)pos, 0);
                int t = leaves_before + 1;
                TreeChain sC(S.leaf_count(), S.degree()), rC(R.leaf_count(), R.degree());
                sC.add(S, Scalar(1));
                rC.add(R, Scalar(1));
                TreeChain back = graft_oi(sC, rC, t);
                Scalar sigma = back.c.at(T);
                return h_.scale(h_.oi(eval_tree(S), t, eval_tree(R)), sigma);
            }
            ++leaves_before;
            pos = end;
        }
        throw ValidationError("free_extend: malformed tree");
    }

    static size_t subtree_end(const std::vector<int>& code, size_t pos) {
        int need = 1;
        while (need > 0) {
            need += code[pos] - 1;
            ++pos;
        }
        return pos;
    }

    Handle& h_;
    std::map<int, typename Handle::Elem> images_;
    std::map<Tree, typename Handle::Elem> memo_;
};

// CC(K) as its own target.
struct CCHandle {
    using Elem = TreeChain;
    Elem oi(const Elem& a, int t, const Elem& b) { return graft_oi(a, b, t); }
    Elem add(const Elem& a, const Elem& b) { return a + b; }
    Elem scale(const Elem& a, const Scalar& s) { return a.scaled(s); }
    Elem zero(int arity, int degree) { return TreeChain(arity, degree); }
    bool image_ok(int n, const Elem& e) { return e.arity == n + 2 && (e.is_zero() || e.degree == n); }
};

}  // namespace odot
