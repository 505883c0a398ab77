#pragma once

#include <mutex>
#include <tuple>
#include <vector>

#include "odot/bar.hpp"
#include "odot/trees.hpp"

namespace odot {

// Letter of N = (up)V + (up)B_*(V). XV letters have degree 1, a BG letter of
// bar degree n has degree n+1.
struct OGen {
    int kind = 0;  // 0: XV(idx), 1: BG(bar word)
    int idx = 0;
    BarWord bw;

    static OGen xv(int i) {
        OGen g;
        g.kind = 0;
        g.idx = i;
        return g;
    }
    static OGen bg(const BarWord& w) {
        OGen g;
        g.kind = 1;
        g.bw = w;
        return g;
    }
    int degree() const { return kind == 0 ? 1 : bar_deg(bw) + 1; }
    int bar_degree() const { return bar_deg(bw); }
    bool operator<(const OGen& o) const {
        if (kind != o.kind)
            return kind < o.kind;
        if (kind == 0)
            return idx < o.idx;
        return bw < o.bw;
    }
    bool operator==(const OGen& o) const {
        return kind == o.kind && (kind == 0 ? idx == o.idx : bw == o.bw);
    }
};

// Left-comb normal-form word ((...(l1 . l2) ...) . lm); the empty word is the
// unit of the length grading.
struct OWord {
    std::vector<OGen> L;

    bool operator<(const OWord& o) const { return L < o.L; }
    bool operator==(const OWord& o) const { return L == o.L; }
    size_t len() const { return L.size(); }
    int xv_count() const {
        int n = 0;
        for (auto& g : L)
            n += g.kind == 0;
        return n;
    }
    int bg_count() const { return (int)L.size() - xv_count(); }
    int xv_degree() const { return xv_count(); }
    int bg_degree() const {
        int d = 0;
        for (auto& g : L)
            if (g.kind == 1)
                d += g.degree();
        return d;
    }
    int degree() const { return xv_degree() + bg_degree(); }
    int prefix_degree(size_t slot) const {  // degrees of letters before slot (0-based)
        int d = 0;
        for (size_t t = 0; t < slot; ++t)
            d += L[t].degree();
        return d;
    }
    // slot (0-based) of the unique BG letter; -1 when none
    int bg_slot() const {
        for (size_t t = 0; t < L.size(); ++t)
            if (L[t].kind == 1)
                return (int)t;
        return -1;
    }
    std::string str(const Drinfeld& A) const;
};

struct OElem {
    std::map<OWord, Scalar> c;

    bool is_zero() const { return c.empty(); }
    void add(const OWord& w, const Scalar& s) {
        if (s.is_zero())
            return;
        auto [it, fresh] = c.emplace(w, s);
        if (!fresh) {
            it->second += s;
            if (it->second.is_zero())
                c.erase(it);
        }
    }
    void axpy(const Scalar& a, const OElem& o) {
        if (a.is_zero())
            return;
        for (auto& [w, s] : o.c)
            add(w, a * s);
    }
    OElem scaled(const Scalar& a) const {
        OElem r;
        r.axpy(a, *this);
        return r;
    }
    OElem operator+(const OElem& o) const {
        OElem r = *this;
        r.axpy(Scalar(1), o);
        return r;
    }
    OElem operator-(const OElem& o) const {
        OElem r = *this;
        r.axpy(Scalar(-1), o);
        return r;
    }
    bool operator==(const OElem& o) const { return c == o.c; }
    static OElem unit() {
        OElem e;
        e.add(OWord{}, Scalar(1));
        return e;
    }
    static OElem single(const OGen& g) {
        OElem e;
        e.add(OWord{{g}}, Scalar(1));
        return e;
    }
    // prune words whose XV count exceeds the cap (order-window truncation)
    OElem truncate_xv(int cap) const {
        OElem r;
        for (auto& [w, s] : c)
            if (w.xv_count() <= cap)
                r.add(w, s);
        return r;
    }
    // prune words carrying a BG letter below the given bar degree
    OElem truncate_bg_below(int floor) const {
        OElem r;
        for (auto& [w, s] : c) {
            int slot = w.bg_slot();
            if (slot < 0 || w.L[(size_t)slot].bar_degree() >= floor)
                r.add(w, s);
        }
        return r;
    }
    std::string str(const Drinfeld& A) const;
};

// Binary bracketing state with OGen leaves: the intermediate objects of the
// reassociation calculus. shape is a preorder code over {2, 0}.
struct OTree {
    std::vector<int> shape;
    std::vector<OGen> leaves;
    bool operator<(const OTree& o) const {
        if (shape != o.shape)
            return shape < o.shape;
        return leaves < o.leaves;
    }
    bool operator==(const OTree& o) const { return shape == o.shape && leaves == o.leaves; }
};

struct OTreeElem {
    std::map<OTree, Scalar> c;
    bool is_zero() const { return c.empty(); }
    void add(const OTree& t, const Scalar& s) {
        if (s.is_zero())
            return;
        auto [it, fresh] = c.emplace(t, s);
        if (!fresh) {
            it->second += s;
            if (it->second.is_zero())
                c.erase(it);
        }
    }
    void axpy(const Scalar& a, const OTreeElem& o) {
        if (a.is_zero())
            return;
        for (auto& [t, s] : o.c)
            add(t, a * s);
    }
};

// Tensor-word readout of the J map: same keys as normal-form words, but
// living in the plain tensor product of the letter spaces.
struct JElem {
    std::map<OWord, Scalar> c;
    bool operator==(const JElem& o) const { return c == o.c; }
    bool is_zero() const { return c.empty(); }
    void add(const OWord& w, const Scalar& s) {
        if (s.is_zero())
            return;
        auto [it, fresh] = c.emplace(w, s);
        if (!fresh) {
            it->second += s;
            if (it->second.is_zero())
                c.erase(it);
        }
    }
};

// The odot-calculus on (up)V + (up)B_*(V): bullet actions, normalization of
// products through the Phi reassociators, components and invariants.
class OdotCalc {
  public:
    OdotCalc(const Drinfeld& A, const BarModule& bar);

    const Drinfeld& algebra() const { return A_; }
    const BarModule& bar() const { return bar_; }

    // bullet actions (rules (i)-(iii), Sweedler-distributed along the comb)
    OElem bullet_left(const SparseVec& a, const OElem& x) const;
    OElem bullet_right(const OElem& x, const SparseVec& a) const;
    OElem bullet_left_basis(int i, const OWord& w) const;
    OElem bullet_right_basis(const OWord& w, int i) const;

    // odot product: concatenation of combs re-normalized to the left comb
    OElem mul(const OElem& x, const OElem& y) const;
    OElem mul_words(const OWord& u, const OWord& v) const;

    // replace the letter at slot (0-based) by an element and re-normalize;
    // no Koszul sign applied here (callers own their sign conventions)
    OElem insert_at(const OWord& w, size_t slot, const OElem& val) const;

    // degree-one derivation d_C on odot((up)V)
    OElem d_C_V(const OElem& x) const;

    // normal-form readout J; the sign on the one-BG component makes
    // J . D_{-1} = (id x d_B x id) . J exact
    JElem to_tensor_J(const OElem& x) const;

    // component bases
    std::vector<OWord> words_xv(int len) const;  // odot^len of (up)V
    // words with nletters letters total, exactly one BG letter at bar degree barDeg
    std::vector<OWord> words_one_bg(int nletters, int barDeg) const;
    std::vector<OElem> invariant_basis(const std::vector<OWord>& component) const;

    // --- bracketing-tree calculus (assoc_move and the coherence suites) ---
    // letters of w hung on the leaves of a full binary bracketing
    OTree tree_of_word(const OWord& w, const Tree& bracketing) const;
    OTreeElem bullet_left_tree(int i, const OTree& t) const;
    OTreeElem bullet_right_tree(const OTree& t, int i) const;
    // dir +1: x.(y.z) -> left-nested combination; dir -1: the reverse.
    // path descends from the root: 0 = left child, 1 = right child.
    OTreeElem assoc_move(const OTreeElem& x, const std::vector<int>& path, int dir) const;
    OElem normalize_tree(const OTreeElem& x) const;          // bottom-up, via mul
    OElem normalize_tree_topdown(const OTreeElem& x) const;  // root-first move path

  private:
    OTree subtree(const OTree& t, bool right) const;
    OTree join(const OTree& l, const OTree& r) const;
    OTreeElem move_at(const OTree& t, const std::vector<int>& path, int dir) const;
    OTreeElem bullet_subtree(int i, const OTree& t, bool left_side) const;

    const Drinfeld& A_;
    const BarModule& bar_;
    bool trivial_phi_;

    mutable std::mutex mu_;
    mutable std::map<std::pair<int, OWord>, OElem> bl_memo_, br_memo_;
    mutable std::map<std::pair<OWord, OWord>, OElem> mul_memo_;
    mutable std::map<std::tuple<int, int, OTree>, OTreeElem> bullet_tree_memo_;
    mutable std::map<OTree, OElem> topdown_memo_;
};

}  // namespace odot
