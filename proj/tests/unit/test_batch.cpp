#include "doctest.h"

#include "xclass/batch.hpp"
#include "xclass/synth.hpp"

using namespace xclass;

TEST_CASE("parallel batch matches the serial reference") {
    SynthSpec s;
    s.blobs = 4;
    s.dim = 3;
    s.noise_features = 1;
    s.per_class = 250;
    s.seed = 3;
    const Dataset d = gen_synth(s);
    XClassModel m({}, d.names);
    m.prime({d.rows.begin(), d.rows.begin() + 400}, {d.labels.begin(), d.labels.begin() + 400});
    for (std::size_t i = 400; i < d.size(); ++i) m.learn(d.rows[i]);

    for (bool masked : {true, false}) {
        const Scorer sc = m.scorer(masked);
        const auto a = predict_batch_serial(sc, d.rows);
        for (int threads : {1, 2, 4}) {
            const auto b = predict_batch_parallel(sc, d.rows, threads);
            REQUIRE(a.size() == b.size());
            for (std::size_t i = 0; i < a.size(); ++i) {
                CHECK(a[i].label == b[i].label);
                CHECK(a[i].lambdas == b[i].lambdas);
                CHECK(a[i].typicality == b[i].typicality);
            }
            CHECK(confidence_batch_serial(sc, d.rows) == confidence_batch_parallel(sc, d.rows, threads));
        }
    }
    // model.predict is the single-row form of the masked batch
    const auto p = predict_batch_serial(m.scorer(), d.rows);
    for (std::size_t i = 0; i < 50; ++i) CHECK(m.predict(d.rows[i]).lambdas == p[i].lambdas);
}

TEST_CASE("errors inside the parallel region reach the caller") {
    XClassModel m;
    m.prime({{0.0, 0.0}, {1.0, 1.0}}, {"a", "b"});
    const Scorer sc = m.scorer();
    std::vector<Vec> rows(64, Vec{0.5, 0.5});
    rows[40] = Vec{0.5};
    CHECK_THROWS(predict_batch_parallel(sc, rows, 2));
    CHECK(max_threads() >= 1);
}
