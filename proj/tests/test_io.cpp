#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "netdiff/io.hpp"

using namespace netdiff;

TEST_CASE("matrix text round trip") {
    Rng rng(601);
    SUBCASE("square") {
        const Eigen::MatrixXd m = testutil::random_matrix(rng, 5, 5, -3.0, 3.0);
        std::stringstream ss;
        save_matrix(ss, m);
        const Eigen::MatrixXd back = load_matrix(ss, "roundtrip");
        CHECK((m - back).lpNorm<Eigen::Infinity>() == 0.0); // exact: shortest round-trip
    }
    SUBCASE("rectangular header uses two dimensions") {
        const Eigen::MatrixXd m = testutil::random_matrix(rng, 3, 2);
        std::stringstream ss;
        save_matrix(ss, m);
        CHECK(ss.str().substr(0, 4) == "3 2\n");
        const Eigen::MatrixXd back = load_matrix(ss, "rect");
        CHECK((m - back).lpNorm<Eigen::Infinity>() == 0.0);
    }
    SUBCASE("comments and blank lines are skipped") {
        std::stringstream ss("# weight matrix\n2\n\n0 0.5\n# middle\n0.25 0\n");
        const Eigen::MatrixXd m = load_matrix(ss, "commented");
        CHECK(m(0, 1) == doctest::Approx(0.5));
        CHECK(m(1, 0) == doctest::Approx(0.25));
    }
    SUBCASE("parse failures carry line numbers") {
        std::stringstream empty("");
        CHECK_THROWS_AS(load_matrix(empty, "empty"), ParseError);

        std::stringstream bad_token("2\n0 x\n0 0\n");
        try {
            load_matrix(bad_token, "tok");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line == 2);
            CHECK(std::string(e.what()).find("'x'") != std::string::npos);
        }

        std::stringstream short_row("2\n1 2 3\n4 5 6\n");
        CHECK_THROWS_AS(load_matrix(short_row, "row"), ParseError);
    }
}

TEST_CASE("vector text round trip") {
    Rng rng(602);
    const Eigen::VectorXd v = testutil::random_vector(rng, 7, -10.0, 10.0);
    std::stringstream ss;
    save_vector(ss, v);
    const Eigen::VectorXd back = load_vector(ss, "roundtrip");
    CHECK((v - back).lpNorm<Eigen::Infinity>() == 0.0);

    std::stringstream two_per_line("2\n1 2\n3\n");
    CHECK_THROWS_AS(load_vector(two_per_line, "bad"), ParseError);
}

TEST_CASE("trajectory round trip") {
    Rng rng(603);
    Trajectory traj;
    for (int s = 0; s < 4; ++s) traj.states.push_back(testutil::random_vector(rng, 3));
    std::stringstream ss;
    save_trajectory(ss, traj);
    const Trajectory back = load_trajectory(ss, "roundtrip");
    REQUIRE(back.states.size() == traj.states.size());
    for (std::size_t i = 0; i < traj.states.size(); ++i)
        CHECK((traj.states[i] - back.states[i]).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("sequence file round trip and diagnostics") {
    const ChurnProcess proc{6, 0.3, 2.0, 404};
    NetworkSequence seq = evolve(proc, sample_equilibrium_graph(proc), 4);

    SUBCASE("round trip preserves every cross-section and the header") {
        std::stringstream ss;
        save_sequence(ss, seq);
        const NetworkSequence back = load_sequence(ss, "roundtrip");
        REQUIRE(back.length() == seq.length());
        for (long i = 0; i < seq.length(); ++i)
            CHECK(back.graphs[static_cast<std::size_t>(i)] ==
                  seq.graphs[static_cast<std::size_t>(i)]);
    }
    SUBCASE("empty file fails") {
        std::stringstream empty("");
        CHECK_THROWS_AS(load_sequence(empty, "empty"), ParseError);
    }
    SUBCASE("header mismatch with the block count fails") {
        std::stringstream missing("2 3\n0 1\n1 0\n\n0 0\n1 0\n"); // promises 3, has 2
        CHECK_THROWS_AS(load_sequence(missing, "missing"), ParseError);

        std::stringstream extra("2 1\n0 1\n1 0\n\n0 0\n1 0\n"); // promises 1, has 2
        CHECK_THROWS_AS(load_sequence(extra, "extra"), ParseError);
    }
    SUBCASE("non-binary entries and diagonal ties fail") {
        std::stringstream bad("2 1\n0 2\n1 0\n");
        CHECK_THROWS_AS(load_sequence(bad, "bad"), ParseError);
        std::stringstream diag("2 1\n1 0\n0 0\n");
        CHECK_THROWS_AS(load_sequence(diag, "diag"), ParseError);
    }
}

TEST_CASE("format_double emits shortest exact decimal") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0 / 3.0) == "0.3333333333333333");
    CHECK(format_double(-0.0) == "-0");
    CHECK(format_double(126.0) == "126");
}
