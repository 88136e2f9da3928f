// Count lattice points, evaluate a lower bound, then estimate m_hat for a small coin experiment.

#include <cstdio>

#include "scolab/experiments.hpp"
#include "scolab/info_bounds.hpp"
#include "scolab/lattice.hpp"

int main() {
    using namespace scolab;
    const RadiusSpec R = RadiusSpec::parse("2");
    std::printf("|Z^2 ∩ B_2| = %llu\n", static_cast<unsigned long long>(count_integer_points_l2(2, R)));

    BoundQuery q;
    q.d = 4;
    q.R = R;
    q.epsilon = 0.1;
    q.delta = 0.25;
    const auto lb = linf_lower_bounds(q);
    std::printf("linf lower bound (d=4, R=2, eps=0.1): %.3f\n", lb.combined);

    ExperimentConfig c;
    c.id = "quickstart";
    c.family = "coin";
    c.d = 2;
    c.R = RadiusSpec(1.0);
    c.epsilon = 0.25;
    c.trials = 200;
    const auto res = run_experiment(c);
    for (const auto& s : res.per_m) std::printf("m=%4lld  p_hat=%.3f\n", s.m, s.p_hat);
    if (res.m_hat) std::printf("m_hat = %lld\n", *res.m_hat);
    return 0;
}
