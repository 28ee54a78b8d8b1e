#include "painleve/sampling.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace painleve {

double torus_max_sample(const std::function<cplx(cplx, cplx)>& f, const Bidisc& bidisc,
                        int n_samples, double safety) {
    if (n_samples < 1) throw Error("torus_max_sample: n_samples must be positive");
    if (!(safety >= 1.0)) throw Error("torus_max_sample: safety factor must be >= 1");

    const double step = 2.0 * std::numbers::pi / static_cast<double>(n_samples);
    double best = 0.0;
    for (int q = 0; q < n_samples; ++q) {
        const double phi = step * static_cast<double>(q);
        const cplx v = bidisc.center_v + bidisc.radius_v * std::polar(1.0, phi);
        for (int pp = 0; pp < n_samples; ++pp) {
            const int p = (q % 2 == 0) ? pp : n_samples - 1 - pp; // serpentine
            const cplx u = bidisc.center_u + bidisc.radius_u * std::polar(1.0, step * p);
            cplx value;
            try {
                value = f(u, v);
            } catch (const Error& e) {
                std::ostringstream os;
                os << e.what() << " [at torus sample u=(" << u.real() << "," << u.imag()
                   << "), v=(" << v.real() << "," << v.imag() << ")]";
                throw SampleError(os.str());
            }
            const double m = std::abs(value);
            if (!std::isfinite(m)) {
                std::ostringstream os;
                os << "torus_max_sample: non-finite value at sample u=(" << u.real() << ","
                   << u.imag() << "), v=(" << v.real() << "," << v.imag() << ")";
                throw SampleError(os.str());
            }
            if (m > best) best = m;
        }
    }
    return best * safety;
}

} // namespace painleve
