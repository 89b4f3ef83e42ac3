#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "blockprox/matrix.hpp"
#include "blockprox/partition.hpp"
#include "blockprox/spectral.hpp"
#include "test_oracles.hpp"

using namespace blockprox;

TEST_CASE("make_partition splits evenly") {
    const auto p = make_partition(10, 5);
    CHECK(p.boundaries() == std::vector<std::size_t>{0, 2, 4, 6, 8, 10});

    const auto singles = make_partition(5, 5);
    CHECK(singles.boundaries() == std::vector<std::size_t>{0, 1, 2, 3, 4, 5});

    const auto uneven = make_partition(7, 3);
    CHECK(uneven.boundaries() == std::vector<std::size_t>{0, 3, 5, 7});
}

TEST_CASE("make_partition rejects bad shapes") {
    CHECK_THROWS_AS(make_partition(10, 0), InvalidPartitionError);
    CHECK_THROWS_AS(make_partition(3, 4), InvalidPartitionError);
}

TEST_CASE("partition sizes sum to n and differ by at most one") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + rng() % 200;
        const std::size_t s = 1 + rng() % n;
        const auto p = make_partition(n, s);
        std::size_t total = 0, mx = 0, mn = n + 1;
        for (std::size_t i = 0; i < p.blocks(); ++i) {
            total += p.size(i);
            mx = std::max(mx, p.size(i));
            mn = std::min(mn, p.size(i));
        }
        CHECK(total == n);
        CHECK(mx - mn <= 1);
    }
}

TEST_CASE("block_of finds the covering block") {
    const auto p = make_partition(7, 3);  // [0,3) [3,5) [5,7)
    CHECK(p.block_of(0) == 0);
    CHECK(p.block_of(2) == 0);
    CHECK(p.block_of(3) == 1);
    CHECK(p.block_of(6) == 2);
}

TEST_CASE("spectral norm of simple Grams") {
    // diag(3,4) as a Gram operator
    GramOperator diag;
    diag.dim = 2;
    diag.apply = [](std::span<const double> in, std::span<double> out) {
        out[0] = 3.0 * in[0];
        out[1] = 4.0 * in[1];
    };
    CHECK(spectral_norm(diag, 1e-10) == doctest::Approx(4.0).epsilon(1e-8));

    const ColMatrix I5 = ColMatrix::dense(5, 5,
                                          [] {
                                              std::vector<double> v(25, 0.0);
                                              for (int i = 0; i < 5; ++i) v[i * 5 + i] = 1.0;
                                              return v;
                                          }());
    CHECK(spectral_norm(gram_operator(I5)) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("spectral norm matches a dense eigensolver oracle") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + trial % 4;  // up to 5x5 Grams
        std::vector<double> vals(n * n);
        for (auto& v : vals) v = normal(rng);
        const ColMatrix A = ColMatrix::dense(n, n, vals);

        // dense Gram for the oracle
        std::vector<double> G(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                double acc = 0.0;
                for (std::size_t k = 0; k < n; ++k) acc += vals[i * n + k] * vals[j * n + k];
                G[i * n + j] = acc;
            }
        }
        const double expected = oracle::max_eigenvalue_jacobi(G, n);
        const double got = spectral_norm(gram_operator(A), 1e-12);
        CHECK(got == doctest::Approx(expected).epsilon(1e-6));
    }
}

TEST_CASE("spectral norm dominates Rayleigh quotients") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t m = 4 + rng() % 8, n = 3 + rng() % 10;
        std::vector<double> vals(m * n);
        for (auto& v : vals) v = normal(rng);
        const ColMatrix A = ColMatrix::dense(m, n, vals);
        const auto G = gram_operator(A);
        const double lam = spectral_norm(G);
        std::vector<double> probe(n), out(n);
        for (int rep = 0; rep < 5; ++rep) {
            double nrm = 0.0;
            for (auto& v : probe) {
                v = normal(rng);
                nrm += v * v;
            }
            G.apply(probe, out);
            double quad = 0.0;
            for (std::size_t i = 0; i < n; ++i) quad += probe[i] * out[i];
            CHECK(lam * (1.0 + 1e-7) >= quad / nrm);
        }
    }
}

TEST_CASE("block Gram norm on orthonormal and diagonal designs") {
    // identity: every block has unit Gram norm
    std::vector<double> id(16, 0.0);
    for (int i = 0; i < 4; ++i) id[i * 4 + i] = 1.0;
    const ColMatrix I4 = ColMatrix::dense(4, 4, id);
    const auto p = make_partition(4, 2);
    CHECK(block_gram_norm(I4, p, 0) == doctest::Approx(1.0));
    CHECK(block_gram_norm(I4, p, 1) == doctest::Approx(1.0));

    // columns scaled 1 and 2: Gram is diag(1,4)
    const ColMatrix D = ColMatrix::dense(2, 2, {1.0, 0.0, 0.0, 2.0});
    const auto p1 = make_partition(2, 1);
    CHECK(block_gram_norm(D, p1, 0) == doctest::Approx(4.0));
}

TEST_CASE("block Gram norm matches the dense oracle and interlaces") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t m = 20, n = 10;
    std::vector<double> vals(m * n);
    for (auto& v : vals) v = normal(rng);
    const ColMatrix A = ColMatrix::dense(m, n, vals);
    const auto p = make_partition(n, 2);  // blocks of 5 columns

    const double full = spectral_norm(gram_operator(A));
    for (std::size_t blk = 0; blk < 2; ++blk) {
        const std::size_t c0 = p.begin(blk), sz = p.size(blk);
        std::vector<double> G(sz * sz, 0.0);
        for (std::size_t i = 0; i < sz; ++i) {
            for (std::size_t j = 0; j < sz; ++j) {
                double acc = 0.0;
                for (std::size_t k = 0; k < m; ++k) {
                    acc += vals[(c0 + i) * m + k] * vals[(c0 + j) * m + k];
                }
                G[i * sz + j] = acc;
            }
        }
        const double expected = oracle::max_eigenvalue_jacobi(G, sz);
        const double got = block_gram_norm(A, p, blk);
        CHECK(got == doctest::Approx(expected).epsilon(1e-6));
        CHECK(got <= full * (1.0 + 1e-8));
    }
}

TEST_CASE("zero column block yields zero Gram norm") {
    std::vector<Triplet> entries = {{0, 0, 1.0}, {1, 1, 2.0}};  // columns 2,3 empty
    const ColMatrix A = ColMatrix::from_triplets(3, 4, entries);
    const auto p = make_partition(4, 2);
    CHECK(block_gram_norm(A, p, 1) == 0.0);
}

TEST_CASE("interlacing holds on random sparse instances") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 6 + rng() % 25;
        const std::size_t s = 1 + rng() % 4;
        GenParams gp;
        gp.m = 8 + rng() % 10;
        gp.n = n;
        gp.density = 0.4;
        gp.seed = rng();
        const auto data = gen_sparse_ls(gp);
        const auto p = make_partition(n, s);
        const double full = spectral_norm(gram_operator(data.A));
        for (std::size_t i = 0; i < s; ++i) {
            CHECK(block_gram_norm(data.A, p, i) <= full * (1.0 + 1e-8));
        }
    }
}

TEST_CASE("matrix products agree between dense and sparse layouts") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t m = 7, n = 5;
    std::vector<Triplet> entries;
    std::vector<double> dense_vals(m * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
            if (rng() % 3 == 0) {
                const double v = normal(rng);
                entries.push_back({i, j, v});
                dense_vals[j * m + i] = v;
            }
        }
    }
    const ColMatrix S = ColMatrix::from_triplets(m, n, entries);
    const ColMatrix D = ColMatrix::dense(m, n, dense_vals);
    std::vector<double> x(n);
    for (auto& v : x) v = normal(rng);
    const auto ys = S.apply(x);
    const auto yd = D.apply(x);
    for (std::size_t i = 0; i < m; ++i) {
        CHECK(ys[i] == doctest::Approx(yd[i]).epsilon(1e-14));
    }
    std::vector<double> r(m);
    for (auto& v : r) v = normal(rng);
    const auto ts = S.apply_transpose(r);
    const auto td = D.apply_transpose(r);
    for (std::size_t j = 0; j < n; ++j) {
        CHECK(ts[j] == doctest::Approx(td[j]).epsilon(1e-14));
    }
}

TEST_CASE("MatrixMarket round trip, both layouts") {
    std::mt19937_64 rng(13);
    std::normal_distribution<double> normal(0.0, 1.0);

    std::vector<Triplet> entries;
    for (std::size_t j = 0; j < 4; ++j) {
        for (std::size_t i = 0; i < 6; ++i) {
            if (rng() % 2 == 0) entries.push_back({i, j, normal(rng)});
        }
    }
    const ColMatrix S = ColMatrix::from_triplets(6, 4, entries);
    std::stringstream ss;
    S.write_matrix_market(ss);
    CHECK(ss.str().rfind("%%MatrixMarket matrix coordinate real general", 0) == 0);
    const ColMatrix S2 = ColMatrix::read_matrix_market(ss);
    CHECK(S2.rows() == 6);
    CHECK(S2.cols() == 4);
    CHECK(S.to_dense() == S2.to_dense());

    std::vector<double> dense_vals(12);
    for (auto& v : dense_vals) v = normal(rng);
    const ColMatrix D = ColMatrix::dense(3, 4, dense_vals);
    std::stringstream sd;
    D.write_matrix_market(sd);
    const ColMatrix D2 = ColMatrix::read_matrix_market(sd);
    CHECK(D.to_dense() == D2.to_dense());
}

TEST_CASE("vector file round trip") {
    const std::vector<double> v = {1.5, -2.25, 0.0, 3.141592653589793};
    std::stringstream ss;
    write_vector(ss, v);
    CHECK(read_vector(ss) == v);
}

TEST_CASE("BlockVector validates its length") {
    CHECK_THROWS_AS(BlockVector(std::vector<double>(3, 0.0), make_partition(4, 2)), ConfigError);
    BlockVector bv(std::vector<double>{1, 2, 3, 4}, make_partition(4, 2));
    CHECK(bv.block(1)[0] == 3.0);
}
