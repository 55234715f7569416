#include "colehopf/hopf.hpp"

#include <algorithm>
#include <cmath>

namespace colehopf {

TransformedField apply_transform(const TransformPair& pair, const LinearField& field,
                                 const ParamEnv& env, double eps_pole) {
    const int n = field.grid.n;
    const int nl = field.levels();

    std::vector<double> p(n), q(n);
    for (int i = 0; i < n; ++i) {
        double x = field.grid.point(i);
        p[i] = pair.P(x, env);
        q[i] = pair.Q(x, env);
    }

    TransformedField out;
    out.grid = field.grid;
    out.times = field.times;
    out.eps_pole = eps_pole;
    out.psi.assign(nl, std::vector<double>(n, 0.0));
    out.mask.assign(nl, std::vector<uint8_t>(n, 0));

    std::size_t masked = 0;
    for (int l = 0; l < nl; ++l) {
        double maxabs = 0.0;
        for (double v : field.phi[l]) maxabs = std::max(maxabs, std::abs(v));
        double threshold = eps_pole * maxabs;
        bool any_unmasked = false;
        for (int i = 0; i < n; ++i) {
            double ph = field.phi[l][i];
            if (std::abs(ph) < threshold || maxabs == 0.0) {
                out.mask[l][i] = 1;
                ++masked;
                continue;
            }
            out.psi[l][i] = p[i] + q[i] * field.dphi[l][i] / ph;
            any_unmasked = true;
        }
        if (!any_unmasked) out.degenerate = true;
    }
    out.masked_fraction = nl > 0 ? double(masked) / (double(nl) * n) : 0.0;
    return out;
}

}  // namespace colehopf
