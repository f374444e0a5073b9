#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "btstrata/lattices.hpp"

using namespace btstrata;
using namespace btstrata::lat;
using ring::ChainRing;

namespace {

Lattice random_lattice(const AmbientPtr& amb, std::mt19937_64& rng, int ngens) {
    const ChainRing& R = *amb->ring(1);
    Matrix g;
    for (int i = 0; i < ngens; ++i) {
        Row r(amb->n());
        for (int j = 0; j < amb->n(); ++j) r[j] = R.decode(rng() % R.size());
        g.push_back(std::move(r));
    }
    return Lattice(amb, 1, std::move(g));
}

std::vector<Row> all_window_vectors(const AmbientPtr& amb) {
    const ChainRing& R = *amb->ring(1);
    uint64_t card = 1;
    for (int i = 0; i < amb->n(); ++i) card *= R.size();
    std::vector<Row> out;
    out.reserve(card);
    for (uint64_t code = 0; code < card; ++code) {
        Row x(amb->n());
        uint64_t t = code;
        for (int i = 0; i < amb->n(); ++i) {
            x[i] = R.decode(t % R.size());
            t /= R.size();
        }
        out.push_back(std::move(x));
    }
    return out;
}

// membership-based dual: keep every window vector pairing to zero with L
Lattice brute_dual(const Lattice& L, const std::vector<Row>& universe) {
    const auto& amb = L.ambient();
    const ChainRing& R = *amb->ring(1);
    Matrix g;
    for (const auto& x : universe) {
        bool ok = true;
        for (const auto& r : L.rows())
            if (!R.is_zero(amb->pairing(1, x, r))) {
                ok = false;
                break;
            }
        if (ok) g.push_back(x);
    }
    return Lattice(amb, 1, std::move(g));
}

// re-present an (a=1)-window lattice inside an a=2 ambient
Lattice rewindow_1_to_2(const Lattice& L, const AmbientPtr& amb2) {
    const ChainRing& R2 = *amb2->ring(1);
    Matrix g;
    for (const auto& r : L.rows()) {
        Row nr(amb2->n());
        for (int j = 0; j < amb2->n(); ++j) {
            ring::CRElem e{};
            e.a0.c[0] = r[j].a0.c[0];
            e.a1.c[0] = r[j].a1.c[0];
            nr[j] = R2.mul_pi_pow(e, 1);
        }
        g.push_back(std::move(nr));
    }
    for (int t = 0; t < amb2->n(); ++t) {
        Row nr(amb2->n(), R2.zero());
        nr[t] = R2.mul_pi_pow(R2.one(), 3);  // pi^{a2+a1} f_t
        g.push_back(std::move(nr));
    }
    return Lattice(amb2, 1, std::move(g));
}

bool rows_zero(const ChainRing& R, const Row& r) {
    for (const auto& e : r)
        if (!R.is_zero(e)) return false;
    return true;
}

}  // namespace

TEST_CASE("howell form is canonical under span-preserving changes") {
    for (auto [p, N, m] :
         {std::tuple<int64_t, int, int>{3, 2, 1}, {3, 4, 1}, {3, 2, 2}}) {
        auto R = ChainRing::make(p, N, m);
        std::mt19937_64 rng(7);
        for (int trial = 0; trial < 60; ++trial) {
            Matrix M;
            int rows = 1 + int(rng() % 4), cols = 3;
            for (int i = 0; i < rows; ++i) {
                Row r(cols);
                for (int j = 0; j < cols; ++j) r[j] = R->decode(rng() % R->size());
                M.push_back(std::move(r));
            }
            Matrix H = howell(*R, M);
            Matrix M2 = M;
            std::shuffle(M2.begin(), M2.end(), rng);
            if (M2.size() >= 2) {
                ring::CRElem c = R->decode(rng() % R->size());
                for (int j = 0; j < cols; ++j)
                    M2[0][j] = R->add(M2[0][j], R->mul(c, M2[1][j]));
            }
            ring::CRElem u = R->decode(rng() % R->size());
            if (R->val(u) == 0)
                for (int j = 0; j < cols; ++j) M2[0][j] = R->mul(M2[0][j], u);
            CHECK(howell(*R, M2) == H);
            // membership count agrees with explicit span scan on the tiny ring
            if (R->size() <= 9) {
                std::set<std::string> span;
                uint64_t sz = R->size();
                std::vector<uint64_t> coeffs(M.size(), 0);
                bool done = false;
                while (!done) {
                    Row x(cols, R->zero());
                    for (size_t i = 0; i < M.size(); ++i) {
                        ring::CRElem c = R->decode(coeffs[i]);
                        for (int j = 0; j < cols; ++j)
                            x[j] = R->add(x[j], R->mul(c, M[i][j]));
                    }
                    std::string key;
                    for (int j = 0; j < cols; ++j)
                        key += std::to_string(R->encode(x[j])) + ",";
                    span.insert(key);
                    done = true;
                    for (size_t i = 0; i < coeffs.size(); ++i) {
                        if (++coeffs[i] < sz) {
                            done = false;
                            break;
                        }
                        coeffs[i] = 0;
                    }
                }
                uint64_t members = 0;
                for (uint64_t c0 = 0; c0 < sz; ++c0)
                    for (uint64_t c1 = 0; c1 < sz; ++c1)
                        for (uint64_t c2 = 0; c2 < sz; ++c2) {
                            Row x = {R->decode(c0), R->decode(c1), R->decode(c2)};
                            if (member(*R, H, x)) ++members;
                        }
                CHECK(members == span.size());
            }
        }
    }
}

TEST_CASE("kernel is sound and complete on a tiny ring") {
    auto R = ChainRing::make(3, 2, 1);
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        Matrix M(3, Row(2));
        for (auto& r : M)
            for (auto& e : r) e = R->decode(rng() % R->size());
        Matrix K = kernel(*R, M, 2);
        for (const auto& u : K) {
            Row prod(2, R->zero());
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 2; ++j)
                    prod[j] = R->add(prod[j], R->mul(u[i], M[i][j]));
            CHECK(rows_zero(*R, prod));
        }
        for (uint64_t c0 = 0; c0 < R->size(); ++c0)
            for (uint64_t c1 = 0; c1 < R->size(); ++c1)
                for (uint64_t c2 = 0; c2 < R->size(); ++c2) {
                    Row u = {R->decode(c0), R->decode(c1), R->decode(c2)};
                    Row prod(2, R->zero());
                    for (int i = 0; i < 3; ++i)
                        for (int j = 0; j < 2; ++j)
                            prod[j] = R->add(prod[j], R->mul(u[i], M[i][j]));
                    if (rows_zero(*R, prod)) CHECK(member(*R, K, u));
                }
    }
}

TEST_CASE("standard lattices") {
    auto amb = Ambient::make(4, 3, 2);
    const ChainRing& R = *amb->ring(1);
    Lattice L0 = standard_lattice(amb, 0);
    for (const auto& r : L0.rows()) {
        int nz = 0;
        for (const auto& e : r)
            if (!R.is_zero(e)) {
                CHECK(R.val(e) == amb->a());
                ++nz;
            }
        CHECK(nz == 1);
    }
    CHECK(standard_lattice(amb, 4) == L0.pi_inverse());
    Lattice L1 = standard_lattice(amb, 1);
    CHECK(R.val(L1.rows()[0][0]) == amb->a() - 1);
    CHECK(R.val(L1.rows()[1][1]) == amb->a());
    for (int i = -4; i < 4; ++i)
        CHECK(standard_lattice(amb, i + 1).contains(standard_lattice(amb, i)));
    CHECK_THROWS_AS(standard_lattice(amb, 100), WindowOverflow);
}

TEST_CASE("standard chain duality and periodicity") {
    for (int n = 3; n <= 6; ++n) {
        auto amb = Ambient::make(n, 3, 2);
        for (int i = -2 * n + 1; i <= 2 * n; ++i) {
            Lattice Li = standard_lattice(amb, i);
            CHECK(Li.dual() == standard_lattice(amb, -i));
            if (i - n >= -2 * n) CHECK(standard_lattice(amb, i - n) == Li.pi_scale(1));
        }
        Lattice L0 = standard_lattice(amb, 0);
        CHECK(L0.dual() == L0);
        CHECK(L0.pi_scale(1).dual() == L0.pi_inverse());
    }
}

TEST_CASE("dual against membership oracle, De Morgan, involution") {
    auto amb = Ambient::make(3, 3, 1);
    auto universe = all_window_vectors(amb);
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        Lattice L = random_lattice(amb, rng, 1 + int(rng() % 3));
        Lattice Lp = random_lattice(amb, rng, 1 + int(rng() % 3));
        Lattice D = L.dual();
        CHECK(D == brute_dual(L, universe));
        CHECK(D.dual() == L);
        CHECK(L.intersect(Lp).dual() == D.sum(Lp.dual()));
        CHECK(L.sum(Lp).dual() == D.intersect(Lp.dual()));
        CHECK(L.intersect(Lp).length() + L.sum(Lp).length() ==
              L.length() + Lp.length());
        CHECK(L.sum(L) == L);
        CHECK(L.sum(L.intersect(Lp)) == L);
    }
}

TEST_CASE("duality is inclusion-reversing on vertex lattices") {
    auto amb = Ambient::make(3, 3, 2);
    auto verts = enumerate_vertex_lattices(amb, {.anchor_window = 1});
    REQUIRE(verts.size() > 1);
    for (const auto& L : verts)
        for (const auto& Lp : verts)
            if (Lp.contains(L)) CHECK(L.dual().contains(Lp.dual()));
}

TEST_CASE("lattice types") {
    auto amb4 = Ambient::make(4, 3, 2);
    CHECK(lattice_type(standard_lattice(amb4, 0)) == 0);
    CHECK(lattice_type(standard_lattice(amb4, -1)) == 2);
    CHECK(lattice_type(standard_lattice(amb4, -2)) == 4);
    auto amb3 = Ambient::make(3, 3, 2);
    Lattice piL0 = standard_lattice(amb3, 0).pi_scale(1);
    CHECK(lattice_type(piL0) == 6);  // dim(pi^{-1} L0 / pi L0) = 2n
    CHECK_THROWS_AS(lattice_type(standard_lattice(amb3, 1)), NotIntegral);
}

TEST_CASE("vertex predicate") {
    auto amb = Ambient::make(4, 3, 2);
    CHECK(is_vertex(standard_lattice(amb, 0)));
    CHECK(is_vertex(standard_lattice(amb, -1)));
    CHECK(is_vertex(standard_lattice(amb, -2)));
    CHECK(!is_vertex(standard_lattice(amb, 0).pi_scale(1)));
    CHECK(!is_vertex(standard_lattice(amb, 1)));
}

TEST_CASE("vertex enumeration: filters and counts") {
    auto amb3 = Ambient::make(3, 3, 2);
    Lattice L0 = standard_lattice(amb3, 0);
    auto above0 = enumerate_vertex_lattices(
        amb3, {.type_filter = 0, .above = L0, .anchor_window = 1});
    CHECK(above0.size() == 1);
    CHECK(above0[0] == L0);
    auto odd = enumerate_vertex_lattices(amb3, {.type_filter = 3, .anchor_window = 1});
    CHECK(odd.empty());

    // n=4: type-2 vertex lattices containing the standard type-4 lattice match
    // the 40 isotropic lines of its 4-dim symplectic quotient
    auto amb4 = Ambient::make(4, 3, 2);
    Lattice Lm2 = standard_lattice(amb4, -2);
    auto above = enumerate_vertex_lattices(
        amb4, {.type_filter = 2, .above = Lm2, .anchor_window = 1});
    CHECK(above.size() == 40);
    for (const auto& L : above) CHECK(L.contains(Lm2));
}

TEST_CASE("fast and brute vertex enumeration agree") {
    auto amb1 = Ambient::make(3, 3, 1);
    auto brute = enumerate_vertex_lattices_brute(amb1);
    auto amb2 = Ambient::make(3, 3, 2);
    auto fast = enumerate_vertex_lattices(amb2, {.anchor_window = 1});
    REQUIRE(!brute.empty());
    std::set<std::string> fast_keys, brute_keys;
    for (const auto& L : fast) fast_keys.insert(L.encode());
    for (const auto& L : brute) brute_keys.insert(rewindow_1_to_2(L, amb2).encode());
    CHECK(fast_keys == brute_keys);
    for (const auto& L : brute) CHECK(lattice_type(L) % 2 == 0);
}

TEST_CASE("rational descent inverts base change") {
    auto amb = Ambient::make(3, 3, 1);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 25; ++trial) {
        Lattice L = random_lattice(amb, rng, 2);
        for (int m : {2, 3}) {
            Lattice Lm = L.embed(m);
            CHECK(rational_descent(Lm) == L);
        }
    }
}

TEST_CASE("tau commutes with dual at level 2") {
    auto amb = Ambient::make(3, 3, 1);
    std::mt19937_64 rng(13);
    const ChainRing& R = *amb->ring(2);
    for (int trial = 0; trial < 20; ++trial) {
        Matrix g;
        for (int i = 0; i < 2; ++i) {
            Row r(3);
            for (auto& e : r) e = R.decode(rng() % R.size());
            g.push_back(std::move(r));
        }
        Lattice L(amb, 2, std::move(g));
        CHECK(L.tau().dual() == L.dual().tau());
        CHECK(L.tau_inv().tau() == L);
    }
}

TEST_CASE("json round trip is bit exact") {
    auto amb = Ambient::make(4, 3, 2);
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        Lattice L = random_lattice(amb, rng, 3);
        Lattice back = lattice_from_json(lattice_to_json(L));
        CHECK(back == L);
        CHECK(lattice_to_json(back) == lattice_to_json(L));
        Lattice Lm = L.embed(2);
        CHECK(lattice_from_json(lattice_to_json(Lm)) == Lm);
    }
}
