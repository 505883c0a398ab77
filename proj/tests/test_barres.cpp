#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "odot/bar.hpp"

using namespace odot;

static BarElem word(std::initializer_list<int> w) {
    BarElem e;
    e.add(BarWord(w), Scalar(1));
    return e;
}

TEST_CASE("d_bar basics over E2") {
    Drinfeld A = make_e2(0);
    BarModule B(A, 6);

    // d(1|1) = 1
    CHECK(B.d_bar(word({0, 0, 0})) == word({1, 0}));

    // d(1|gbar|1) = (gbar|1) - (1|gbar) with gbar = g - 1
    BarElem lhs = B.d_bar(word({-1, 0, 0, 0}));
    BarElem expect;
    expect.add({0, 1, 0}, Scalar(1));   // (g|1)
    expect.add({0, 0, 0}, Scalar(-1));  // -(1|1)
    expect.add({0, 0, 1}, Scalar(-1));  // -(1|g)
    expect.add({0, 0, 0}, Scalar(1));   // +(1|1)
    CHECK(lhs == expect);

    // d^2 (1|gbar|gbar|1) = 0 (uses gbar^2 = -2 gbar after pi)
    CHECK(B.d_bar(B.d_bar(word({-2, 0, 0, 0, 0}))).is_zero());

    CHECK_THROWS_AS(B.d_bar(word({1, 0})), ValidationError);
}

TEST_CASE("bimodule action") {
    Drinfeld A = make_e2(0);
    BarModule B(A, 6);
    BarElem x = word({-1, 0, 0, 0});  // (1|gbar|1)

    CHECK(B.act_left(A.unit, x) == x);
    CHECK(B.act_right(x, A.unit) == x);

    // g.(1|gbar|1) = (g|gbar|1)
    CHECK(B.act_left(SparseVec::unitvec(1), x) == word({-1, 1, 0, 0}));

    // (g.g).x = 1.x = x, and iterated action agrees
    SparseVec g = SparseVec::unitvec(1);
    CHECK(B.act_left(A.mul(g, g), x) == B.act_left(g, B.act_left(g, x)));

    // d_bar is a bimodule map
    BarElem y = word({-2, 1, 0, 0, 1});
    CHECK(B.d_bar(B.act_left(g, B.act_right(y, g))) ==
          B.act_left(g, B.act_right(B.d_bar(y), g)));
}

TEST_CASE("contracting homotopy: worked examples") {
    Drinfeld A = make_e2(0);
    BarModule B(A, 6);

    // h(1) = (1|1) and d(h(1)) = 1
    CHECK(B.contract_h(word({1, 0}), Homotopy::Left) == word({0, 0, 0}));
    CHECK(B.d_bar(B.contract_h(word({1, 0}), Homotopy::Left)) == word({1, 0}));

    // h(g) = (1|g), d(h(g)) = g
    CHECK(B.contract_h(word({1, 1}), Homotopy::Left) == word({0, 0, 1}));
    CHECK(B.d_bar(B.contract_h(word({1, 1}), Homotopy::Left)) == word({1, 1}));

    // h(1|gbar|1) = 0 since pi(1) = 0; dh + hd = id on it
    BarElem x = word({-1, 0, 0, 0});
    CHECK(B.contract_h(x, Homotopy::Left).is_zero());
    BarElem both = B.contract_h(B.d_bar(x), Homotopy::Left);
    both.axpy(Scalar(1), B.d_bar(B.contract_h(x, Homotopy::Left)));
    CHECK(both == x);

    // truncation boundary
    std::vector<int> deep = {-6, 0, 0, 0, 0, 0, 0, 0, 0};
    CHECK_THROWS_AS(B.contract_h(word({-6, 0, 0, 0, 0, 0, 0, 0, 0}), Homotopy::Left),
                    TruncationError);
}

TEST_CASE("bar suite: d^2 = 0 and dh + hd = id exhaustively, dim V <= 3, T = 6") {
    std::vector<Drinfeld> algebras = {make_dim1(), make_e2(0), make_z3()};
    for (auto& A : algebras) {
        BarModule B(A, 6);
        for (int n = -1; n >= -6; --n) {
            for (auto& w : B.basis(n)) {
                BarElem x;
                x.add(w, Scalar(1));
                CHECK(B.d_bar(B.d_bar(x)).is_zero());
            }
        }
        for (auto strat : {Homotopy::Left, Homotopy::Right}) {
            for (int n = 1; n >= -5; --n) {
                for (auto& w : B.basis(n)) {
                    BarElem x;
                    x.add(w, Scalar(1));
                    BarElem acc = B.d_bar(B.contract_h(x, strat));
                    if (n <= 0)
                        acc.axpy(Scalar(1), B.contract_h(B.d_bar(x), strat));
                    CHECK(acc == x);
                }
            }
        }
    }
}

TEST_CASE("free generators and generator elements") {
    Drinfeld A = make_z3();
    BarModule B(A, 6);
    CHECK(B.free_generators(0) == std::vector<std::vector<int>>{{}});
    CHECK(B.free_generators(-2).size() == 4);  // vbar dim 2
    BarElem g = B.generator_element(-1, {1});
    REQUIRE(g.c.size() == 1);
    CHECK(bar_deg(g.c.begin()->first) == -1);
}
