#include "cgc/cases.hpp"

#include <cmath>

namespace cgc::verify {

using namespace profile;

std::vector<double> representative_K(const SpaceForm& space, Regime regime)
{
    const bool s3 = space.kappa() == 1;
    switch (regime) {
    case Regime::negative: return {s3 ? -2.5 : -1.5};
    case Regime::flat: return {s3 ? -1.0 : 1.0};
    case Regime::mixed: return {s3 ? -0.4 : 0.4};
    case Regime::positive: return {s3 ? 1.0 : 2.0};
    }
    return {};
}

std::vector<double> param_grid(const Branch& b, int n)
{
    double lo = b.interval.lo, hi = b.interval.hi;
    if (std::isinf(hi))
        hi = std::isinf(lo) ? -0.1 : 3.0;
    if (std::isinf(lo))
        lo = -3.0;
    if (lo == 0.0 && std::isinf(b.interval.hi))
        lo = 0.1;
    if (hi == 0.0 && std::isinf(b.interval.lo))
        hi = -0.1;
    std::vector<double> v;
    for (int i = 0; i < n; ++i)
        v.push_back(lo + (hi - lo) * (i + 1) / (n + 1));
    return v;
}

std::vector<CaseParams> case_grid(Row row, int n)
{
    std::vector<CaseParams> out;
    const SpaceForm sf = row_space(row);
    for (Regime reg : {Regime::negative, Regime::flat, Regime::mixed, Regime::positive}) {
        for (double K : representative_K(sf, reg)) {
            for (const Branch& b : classify(sf, K)) {
                if (b.id.row != row)
                    continue;
                for (double x : param_grid(b, n))
                    out.push_back(make_params(b.id, x));
            }
        }
    }
    return out;
}

}  // namespace cgc::verify
