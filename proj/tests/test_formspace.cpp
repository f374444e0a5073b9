#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "btstrata/formspace.hpp"

using namespace btstrata;
using namespace btstrata::fsp;
using lat::Ambient;
using lat::Lattice;
using lat::standard_lattice;

TEST_CASE("symplectic quotient of a standard vertex lattice") {
    auto amb = Ambient::make(4, 3, 2);
    auto sp = symplectic_quotient(standard_lattice(amb, -1));
    CHECK(sp->kind() == FormKind::symplectic);
    CHECK(sp->dim() == 2);  // type 2t = 2
    for (int i = 0; i < sp->dim(); ++i) CHECK(sp->gram().at(i, i) == 0);
    CHECK_THROWS_AS(symplectic_quotient(standard_lattice(amb, 0)), ZeroType);

    auto sp4 = symplectic_quotient(standard_lattice(amb, -2));
    CHECK(sp4->dim() == 4);
}

TEST_CASE("orthogonal quotient of a standard vertex lattice") {
    auto amb = Ambient::make(4, 3, 2);
    auto sp = orthogonal_quotient(standard_lattice(amb, 0));
    CHECK(sp->kind() == FormKind::orthogonal);
    CHECK(sp->dim() == 4);  // n - 2t with t = 0
    for (int i = 0; i < sp->dim(); ++i)
        for (int j = 0; j < sp->dim(); ++j)
            CHECK(sp->gram().at(i, j) == sp->gram().at(j, i));
    CHECK_THROWS_AS(orthogonal_quotient(standard_lattice(amb, -2)), ZeroDim);
}

TEST_CASE("quotient gram nondegenerate across anchors and sizes") {
    for (int n = 3; n <= 6; ++n) {
        auto amb = Ambient::make(n, 3, 2);
        for (int t = 0; t <= n / 2; ++t) {
            Lattice L = standard_lattice(amb, -t);
            if (t > 0) CHECK(symplectic_quotient(L)->dim() == 2 * t);
            if (n - 2 * t > 0) CHECK(orthogonal_quotient(L)->dim() == n - 2 * t);
        }
    }
}

TEST_CASE("subspace operations") {
    auto F3 = gf::Field::make(3, 1, 1);
    auto sp = FormSpace::standard_symplectic(F3, 1);
    auto lines = enumerate_subspaces(sp, 1, 1, SubspaceConstraint::any);
    CHECK(lines.size() == 4);
    for (const auto& L : lines) {
        CHECK(L.dual() == L);  // dim 2: every line is self-dual
        CHECK(L.dual().dual() == L);
        CHECK(L.frobenius() == L);  // rational points are Frobenius-fixed
        CHECK(L.is_isotropic());
    }
    auto iso = enumerate_subspaces(sp, 1, 1, SubspaceConstraint::isotropic);
    CHECK(iso.size() == 4);
}

TEST_CASE("subspace counts match gaussian binomials and brute force") {
    auto F3 = gf::Field::make(3, 1, 1);
    auto sp2 = FormSpace::standard_symplectic(F3, 1);
    CHECK(enumerate_subspaces(sp2, 1, 1, SubspaceConstraint::any).size() ==
          gaussian_binomial(3, 2, 1));
    auto sp4 = FormSpace::standard_symplectic(F3, 2);
    CHECK(enumerate_subspaces(sp4, 1, 1, SubspaceConstraint::isotropic).size() == 40);
    CHECK(enumerate_subspaces(sp4, 1, 2, SubspaceConstraint::any).size() ==
          gaussian_binomial(3, 4, 2));
    for (int d = 1; d <= 2; ++d) {
        auto all = enumerate_subspaces(sp4, 1, d, SubspaceConstraint::any);
        uint64_t brute = 0;
        for (const auto& U : all)
            if (U.is_isotropic()) ++brute;
        CHECK(enumerate_subspaces(sp4, 1, d, SubspaceConstraint::isotropic).size() ==
              brute);
    }
    auto lines9 = enumerate_subspaces(sp4, 2, 1, SubspaceConstraint::isotropic);
    CHECK(lines9.size() == 820);

    auto o4 = FormSpace::standard_orthogonal_split(F3, 4);
    auto olines = enumerate_subspaces(o4, 1, 1, SubspaceConstraint::isotropic);
    CHECK(olines.size() == 16);
    uint64_t brute = 0;
    for (const auto& U : enumerate_subspaces(o4, 1, 1, SubspaceConstraint::any))
        if (U.is_isotropic()) ++brute;
    CHECK(brute == 16);
    CHECK(o4->witt_index() == 2);
    auto o3 = FormSpace::standard_orthogonal_split(F3, 3);
    CHECK(enumerate_subspaces(o3, 1, 1, SubspaceConstraint::isotropic).size() == 4);
    CHECK(o3->witt_index() == 1);
}

TEST_CASE("dimension formula and duality identities") {
    auto F3 = gf::Field::make(3, 1, 1);
    auto sp = FormSpace::standard_symplectic(F3, 2);
    auto all1 = enumerate_subspaces(sp, 1, 1, SubspaceConstraint::any);
    auto all2 = enumerate_subspaces(sp, 1, 2, SubspaceConstraint::any);
    for (size_t i = 0; i < all2.size(); i += 7)
        for (size_t j = 0; j < all1.size(); j += 3) {
            const auto& U = all2[i];
            const auto& V = all1[j];
            CHECK(U.intersect(V).dim() + U.sum(V).dim() == U.dim() + V.dim());
            CHECK(U.dual().dual() == U);
            CHECK(U.dual().dim() == sp->dim() - U.dim());
        }
}

TEST_CASE("frobenius commutes with duality at q^m <= 81") {
    auto F3 = gf::Field::make(3, 1, 1);
    for (int t : {1, 2}) {
        auto sp = FormSpace::standard_symplectic(F3, t);
        for (int m : {1, 2}) {
            auto subs = enumerate_subspaces(sp, m, 1, SubspaceConstraint::any);
            for (const auto& U : subs)
                CHECK(U.frobenius().dual() == U.dual().frobenius());
        }
    }
}

TEST_CASE("index identity at small sizes") {
    auto F3 = gf::Field::make(3, 1, 1);
    auto sp = FormSpace::standard_symplectic(F3, 2);
    for (int m : {1, 2})
        for (int d : {1, 2}) {
            auto subs = enumerate_subspaces(sp, m, d, SubspaceConstraint::isotropic);
            for (const auto& U : subs) {
                auto D = U.dual();
                int lhs = D.dim() - D.intersect(D.frobenius()).dim();
                int rhs = U.dim() - U.intersect(U.frobenius()).dim();
                CHECK(lhs == rhs);
            }
        }
}

TEST_CASE("lattice-subspace dictionary round trip, exhaustive at n=4 t=2") {
    auto amb = Ambient::make(4, 3, 2);
    Lattice anchor = standard_lattice(amb, -2);
    auto sp = symplectic_quotient(anchor);
    REQUIRE(sp->dim() == 4);
    Lattice lo = sp->origin()->lo, hi = sp->origin()->hi;
    for (int m : {1, 2}) {
        for (int d = 0; d <= 4; ++d) {
            if (m == 2 && d >= 2) break;  // keep the exhaustive walk small
            auto subs = enumerate_subspaces(sp, m, d, SubspaceConstraint::any);
            for (const auto& U : subs) {
                Lattice M = lattice_of_subspace(sp, U);
                CHECK(M.contains(lo.embed(m)));
                CHECK(hi.embed(m).contains(M));
                CHECK(subspace_of_lattice(sp, M) == U);
                bool iso = U.is_isotropic();
                CHECK(iso == M.dual().contains(M));
                CHECK(subspace_of_lattice(sp, M.dual()) == U.dual());
                CHECK(subspace_of_lattice(sp, M.tau()) == U.frobenius());
            }
        }
    }
    CHECK(lattice_of_subspace(sp, Subspace::zero(sp, 1)) == lo);
    CHECK(lattice_of_subspace(sp, Subspace::full(sp, 1)) == hi);
    CHECK_THROWS_AS(subspace_of_lattice(sp, standard_lattice(amb, 4)), NotSandwiched);
}

TEST_CASE("orthogonal dictionary round trip at n=4 t=0") {
    auto amb = Ambient::make(4, 3, 2);
    Lattice anchor = standard_lattice(amb, 0);
    auto sp = orthogonal_quotient(anchor);
    REQUIRE(sp->dim() == 4);
    for (int d = 0; d <= 2; ++d) {
        auto subs = enumerate_subspaces(sp, 1, d, SubspaceConstraint::any);
        for (const auto& U : subs) {
            Lattice M = lattice_of_subspace(sp, U);
            CHECK(subspace_of_lattice(sp, M) == U);
        }
    }
}

TEST_CASE("rational subspaces embed across levels") {
    auto F3 = gf::Field::make(3, 1, 1);
    auto sp = FormSpace::standard_symplectic(F3, 2);
    auto subs = enumerate_subspaces(sp, 1, 2, SubspaceConstraint::isotropic);
    auto lifted = subs[3].at_level(2);
    CHECK(lifted.level() == 2);
    CHECK(lifted.is_rational());
    CHECK(lifted.dim() == 2);
}

TEST_CASE("json round trips") {
    auto F3 = gf::Field::make(3, 1, 1);
    auto sp = FormSpace::standard_orthogonal_split(F3, 4);
    auto sp2 = formspace_from_json(formspace_to_json(*sp));
    CHECK(sp2->dim() == 4);
    CHECK(sp2->gram() == sp->gram());
    CHECK(formspace_to_json(*sp2) == formspace_to_json(*sp));
    auto subs = enumerate_subspaces(sp, 2, 1, SubspaceConstraint::isotropic);
    for (size_t i = 0; i < subs.size(); i += 17) {
        auto U = subs[i];
        auto back = subspace_from_json(sp, subspace_to_json(U));
        CHECK(back == U);
        CHECK(subspace_to_json(back) == subspace_to_json(U));
    }
}

TEST_CASE("subspace enumeration respects the bound") {
    auto F3 = gf::Field::make(3, 1, 1);
    auto sp = FormSpace::standard_symplectic(F3, 2);
    CHECK_THROWS_AS(enumerate_subspaces(sp, 2, 2, SubspaceConstraint::any, 10),
                    BoundExceeded);
}
