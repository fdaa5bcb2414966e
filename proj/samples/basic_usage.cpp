// Speed-limit ratio for a noisy |+> state under damped Jaynes-Cummings
// dynamics, closed form next to the generic trajectory evaluation.

#include <cstdio>

#include "qsl/qsl.hpp"

int main() {
    const qsl::JcParams params(15.0, 2.0);  // lambda, gamma0 in units of omega_0
    const double tau = 1.0;

    for (double p : {1.0, 0.9, 0.8, 0.6}) {
        const auto closed = qsl::qsl_jc_noisy_max_coherent(p, params, tau);
        const qsl::JcTrajectory traj(params, qsl::BlochState{p, 0.0, 0.0});
        const auto generic = qsl::qsl_time_generic(traj, tau);
        std::printf("p = %.2f  tau_qsl/tau = %.8f (closed)  %.8f (generic)\n", p, closed.ratio(),
                    generic.ratio());
    }

    // Dephasing: coherence 0.6, population 0.4, super-Ohmic bath.
    const qsl::DephasingParams bath(1.0, 2.0);
    const auto deph = qsl::qsl_dephasing_closed(0.6, 0.4, bath, 3.0);
    std::printf("dephasing: tau_qsl = %.8f, theta = %.8f rad\n", deph.tau_qsl, deph.theta.radians());
    return 0;
}
