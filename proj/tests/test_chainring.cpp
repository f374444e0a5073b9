#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "btstrata/chainring.hpp"

using namespace btstrata;
using namespace btstrata::ring;

TEST_CASE("pi squared is p, truncation kills it at N=2") {
    auto R = ChainRing::make(3, 4, 1);
    CHECK(R->mul(R->pi(), R->pi()) == R->from_int(3));
    auto R2 = ChainRing::make(3, 2, 1);
    CHECK(R2->is_zero(R2->mul(R2->pi(), R2->pi())));
}

TEST_CASE("(1+pi)(1-pi) = 1-p") {
    auto R = ChainRing::make(3, 6, 1);
    CRElem a = R->add(R->one(), R->pi());
    CRElem b = R->sub(R->one(), R->pi());
    CHECK(R->mul(a, b) == R->sub(R->one(), R->from_int(3)));
}

TEST_CASE("conjugation is an involution fixing the pi-free subring") {
    auto R = ChainRing::make(3, 4, 2);
    CHECK(R->conjugate(R->pi()) == R->neg(R->pi()));
    CHECK(R->conjugate(R->from_int(7)) == R->from_int(7));
    CRElem x = R->add(R->one(), R->pi());
    CHECK(R->conjugate(R->conjugate(x)) == x);
}

TEST_CASE("sigma: trivial at m=1, fixes integers, Frobenius on residues") {
    auto R1 = ChainRing::make(3, 4, 1);
    for (uint64_t i = 0; i < R1->size(); ++i) {
        CRElem a = R1->decode(i);
        CHECK(R1->sigma(a) == a);
    }
    auto R = ChainRing::make(3, 4, 2);
    CHECK(R->sigma(R->from_int(5)) == R->from_int(5));
    CHECK(R->sigma(R->pi()) == R->pi());
    // order m
    for (uint64_t i = 0; i < 200; ++i) {
        CRElem a = R->decode(i % R->size());
        CHECK(R->sigma_iter(a, 2) == a);
    }
    // Teichmueller elements: sigma(t) = t^p (residue level F_{p^2}, N=2)
    auto Rt = ChainRing::make(3, 2, 2);
    auto F9 = Rt->residue_field();
    for (uint32_t c = 0; c < 9; ++c) {
        GRElem t = Rt->gr().teichmueller(c);
        GRElem s = Rt->gr().sigma(t);
        CHECK(Rt->gr().resid_code(s) == F9->pow(c, 3));
    }
    // sigma commutes with residue Frobenius at higher precision too
    auto Rh = ChainRing::make(3, 4, 2);
    for (uint64_t i = 0; i < Rh->size(); i += 7) {
        CRElem a = Rh->decode(i);
        CHECK(Rh->resid_code(Rh->sigma(a)) ==
              Rh->residue_field()->frobenius(Rh->resid_code(a)));
    }
}

TEST_CASE("pi valuation") {
    auto R = ChainRing::make(3, 4, 1);
    CHECK(R->pi_valuation(R->pi()) == 1);
    CHECK(R->pi_valuation(R->from_int(3)) == 2);
    CHECK(!R->pi_valuation(R->zero()).has_value());
    CHECK(R->pi_valuation(R->one()) == 0);
    // v(ab) = v(a) + v(b) when both sides below N
    for (uint64_t i = 1; i < R->size(); ++i)
        for (uint64_t j = 1; j < R->size(); j += 5) {
            CRElem a = R->decode(i), b = R->decode(j);
            CRElem ab = R->mul(a, b);
            if (R->is_zero(ab)) continue;
            int va = R->val(a), vb = R->val(b);
            if (va + vb < R->N()) CHECK(R->val(ab) == va + vb);
        }
}

TEST_CASE("chain ring structure: ideals are exactly (pi^v)") {
    for (auto [p, N, m] : {std::tuple<int64_t, int, int>{3, 2, 1},
                           {3, 4, 1},
                           {3, 2, 2},
                           {3, 4, 2}}) {
        auto R = ChainRing::make(p, N, m);
        // the set of principal ideals ordered by generator valuation is a chain,
        // and every element of valuation v generates (pi^v)
        std::vector<std::set<uint64_t>> ideal(R->N() + 1);
        for (int v = 0; v <= R->N(); ++v) {
            CRElem g = R->mul_pi_pow(R->one(), v);
            for (uint64_t i = 0; i < R->size(); ++i)
                ideal[v].insert(R->encode(R->mul(R->decode(i), g)));
        }
        uint64_t step = R->size() > 100 ? 7 : 1;
        for (uint64_t i = 0; i < R->size(); i += step) {
            CRElem a = R->decode(i);
            int v = R->val(a);
            std::set<uint64_t> gen;
            for (uint64_t j = 0; j < R->size(); ++j)
                gen.insert(R->encode(R->mul(R->decode(j), a)));
            CHECK(gen == ideal[v]);
        }
        for (int v = 0; v < R->N(); ++v) CHECK(ideal[v + 1].size() < ideal[v].size());
    }
}

TEST_CASE("conjugate and sigma commute and are ring homomorphisms") {
    auto R = ChainRing::make(3, 4, 2);
    for (uint64_t i = 0; i < R->size(); i += 11)
        for (uint64_t j = 0; j < R->size(); j += 13) {
            CRElem a = R->decode(i), b = R->decode(j);
            CHECK(R->sigma(R->conjugate(a)) == R->conjugate(R->sigma(a)));
            CHECK(R->sigma(R->mul(a, b)) == R->mul(R->sigma(a), R->sigma(b)));
            CHECK(R->sigma(R->add(a, b)) == R->add(R->sigma(a), R->sigma(b)));
            CHECK(R->conjugate(R->mul(a, b)) ==
                  R->mul(R->conjugate(a), R->conjugate(b)));
            CHECK(R->conjugate(R->add(a, b)) ==
                  R->add(R->conjugate(a), R->conjugate(b)));
        }
}

TEST_CASE("units are exactly elements of valuation zero") {
    auto R = ChainRing::make(3, 4, 1);
    uint64_t units = 0;
    for (uint64_t i = 0; i < R->size(); ++i) {
        CRElem a = R->decode(i);
        if (R->val(a) == 0) {
            ++units;
            CRElem inv = R->inv_unit(a);
            CHECK(R->mul(a, inv) == R->one());
        }
    }
    uint64_t qm = 3;  // residue field size
    CHECK(units == R->size() - R->size() / qm);
}

TEST_CASE("canonical representatives and exact pi division") {
    auto R = ChainRing::make(3, 6, 2);
    for (uint64_t i = 0; i < R->size(); i += 101) {
        CRElem a = R->decode(i);
        for (int v = 0; v <= R->N(); ++v) {
            CRElem c = R->canonical_mod_pi_pow(a, v);
            CRElem diff = R->sub(a, c);
            CHECK(R->val(diff) >= v);
            if (v <= R->N()) {
                CRElem e = R->excess_over_pi_pow(a, v);
                CHECK(R->add(c, R->mul(e, R->mul_pi_pow(R->one(), v))) == a);
            }
        }
        int v = R->val(a);
        if (!R->is_zero(a) && v < R->N()) {
            CRElem s = R->shift_down(a, v);
            CHECK(R->mul_pi_pow(s, v) == a);
        }
    }
}

TEST_CASE("descriptor checks on the value type") {
    auto R = ChainRing::make(3, 4, 1);
    auto S = ChainRing::make(3, 4, 2);
    ChainRingElement a(R, R->one()), b(S, S->one());
    CHECK_THROWS_AS(a + b, DescriptorMismatch);
    CHECK((a * a).value() == R->one());
}
