#include "cgc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>

#include "cgc/cases.hpp"
#include "cgc/elliptic.hpp"
#include "cgc/error.hpp"
#include "cgc/format.hpp"
#include "cgc/ode.hpp"
#include "cgc/oracle.hpp"

namespace cgc::verify {

using geometry::RotationalSurface;
using geometry::Sampler;
using geometry::Signature;
using geometry::Vec4;
using profile::CaseParams;
using profile::Row;
using profile::SpaceForm;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

double uniform(std::mt19937_64& rng, double lo, double hi)
{
    // 53 random bits; platform independent unlike std::uniform_real_distribution
    return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Max-accumulator for one check.
struct Acc {
    double worst = 0;
    long n = 0;
    void add(double v)
    {
        ++n;
        if (!(v <= worst))  // NaN counts as failure
            worst = std::isnan(v) ? kInf : std::max(worst, v);
    }
};

}  // namespace

MoutardPolarData moutard_from_profile(const SpaceForm& space, double r, double dr, double ddr,
                                      double dpsi, double ddpsi)
{
    MoutardPolarData m;
    m.kappa = space.kappa();
    m.kappa1 = space.kappa1();
    m.kappa2 = space.kappa2();
    m.parabolic = space.isotropic();
    m.euclidean = space.kappa() == 0;
    m.dpsi = dpsi;
    m.ddpsi = ddpsi;
    if (m.euclidean) {
        m.D = 1 / r;
        m.dD = -dr / (r * r);
        m.ddD = (2 * dr * dr - r * ddr) / (r * r * r);
        return m;
    }
    const double k = m.kappa;
    m.R = 1 / (k * r);
    m.dR = -dr / (k * r * r);
    m.ddR = (2 * dr * dr - r * ddr) / (k * r * r * r);
    if (!m.parabolic) {
        const double D2 = (k * m.R * m.R - m.kappa1) / m.kappa2;
        m.D = std::sqrt(std::max(0.0, D2));
        m.dD = k * m.R * m.dR / (m.kappa2 * m.D);
        m.ddD = (k * (m.dR * m.dR + m.R * m.ddR) - m.kappa2 * m.dD * m.dD) / (m.kappa2 * m.D);
    }
    return m;
}

MoutardPolarData moutard_from_sample(const CaseParams& params, double s)
{
    const auto ps = profile::profile(params, s);
    return moutard_from_profile(params.id.space, ps.r, ps.dr, ps.ddr, ps.dpsi, ps.ddpsi);
}

double gauss_from_moutard(const MoutardPolarData& m, double t)
{
    const double p1 = m.dpsi, p2 = m.ddpsi;
    double v2, num;
    if (m.euclidean) {
        const double D = m.D, D2 = D * D;
        v2 = (m.kappa1 * m.dD * m.dD + p1 * p1 * D2 * D2) / D2;
        num = D2 * p1 * (D * (p1 * m.ddD - p2 * m.dD) - 2 * m.dD * m.dD * p1);
    } else if (m.parabolic) {
        const double k = m.kappa;
        v2 = p1 * p1 - k * m.dR * m.dR;
        num = (p1 / k) * (k * m.R * (p1 * m.ddR - p2 * m.dR) - p1 * v2);
    } else {
        const double k = m.kappa, k1 = m.kappa1, k2 = m.kappa2;
        const double D2 = m.D * m.D, R = m.R, dR = m.dR;
        const double w = k1 * k * dR * dR + k2 * k2 * k2 * p1 * p1 * D2 * D2;
        v2 = w / (k2 * D2);
        num = k * k2 * p1 *
              (k * k2 * D2 * R * (p1 * m.ddR - p2 * dR) - 2 * p1 * (k * R * dR) * (k * R * dR) - p1 * w);
    }
    if (!std::isfinite(m.R) || !std::isfinite(m.D))
        throw SingularPoint("profile meets the rotation axis", t, 0);
    if (!(std::abs(v2) > 1e-14) || !std::isfinite(v2))
        throw SingularPoint("profile speed vanishes", t, 0);
    return num / (v2 * v2);
}

geometry::CurvatureEstimate curvature_fd(const Sampler& f, Signature sig, double s, double theta,
                                         double h, const Vec4& orient)
{
    return geometry::fd_curvature(f, sig, s, theta, h, orient);
}

namespace {

// lw_fit of offset t from curvature samples along the profile; unusable samples
// (focal points, singular collars) are dropped
geometry::LwFit offset_fit(const RotationalSurface& surf, double t, int n)
{
    const auto w = profile::natural_window(surf.params());
    const Sampler f = [&](double s, double th) { return surf.offset(t, s, th).x; };
    std::vector<std::array<double, 2>> smp;
    for (int i = 0; i < n; ++i) {
        const double s = w.lo + (w.hi - w.lo) * (i + 0.5) / n, th = 0.3;
        try {
            const auto e = geometry::fd_curvature(f, surf.signature(), s, th, 1e-3,
                                                  surf.offset_normal(t, s, th));
            if (std::abs(e.K) > 1e4 || e.K_err > 1e-6 * (1 + std::abs(e.K)) ||
                e.H_err > 1e-6 * (1 + std::abs(e.H)))
                continue;
            smp.push_back({e.K, e.H});
        } catch (const Error&) {
        }
    }
    if (smp.size() < 3)
        throw SingularPoint("too few regular samples on the offset", t, 0);
    return geometry::lw_fit(smp);
}

std::array<double, 3> abc(const geometry::LwFit& f) { return {f.a, f.b, f.c}; }

double dot3(const std::array<double, 3>& a, const std::array<double, 3>& b)
{
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

}  // namespace

geometry::LwFit offset_fit(const CaseParams& params, double t, int n_samples)
{
    return offset_fit(RotationalSurface(params), t, n_samples);
}

BonnetScan bonnet_scan(const CaseParams& params, int n_scan, int n_samples)
{
    const RotationalSurface surf(params);
    const bool sphere = surf.signature() == Signature::euclidean4;
    const double lo = sphere ? 0.0 : -3.0, span = sphere ? 2 * kPi : 6.0;
    const double shift = sphere ? -kPi / 144 : 0.0;

    // b(t) with the sign of (a,b,c) carried continuously along the scan
    std::vector<double> ts(n_scan + 1);
    std::vector<std::array<double, 3>> v(n_scan + 1);
    for (int i = 0; i <= n_scan; ++i) {
        ts[i] = lo + shift + span * i / n_scan;
        v[i] = abc(offset_fit(surf, ts[i], n_samples));
        if (i > 0 && dot3(v[i], v[i - 1]) < 0)
            v[i] = {-v[i][0], -v[i][1], -v[i][2]};
    }
    BonnetScan out;
    for (int i = 0; i < n_scan; ++i) {
        if ((v[i][1] > 0) == (v[i + 1][1] > 0))
            continue;
        double a = ts[i], b = ts[i + 1];
        const auto ref = v[i];
        for (int it = 0; it < 40; ++it) {
            const double m = 0.5 * (a + b);
            auto vm = abc(offset_fit(surf, m, n_samples));
            if (dot3(vm, ref) < 0)
                vm = {-vm[0], -vm[1], -vm[2]};
            if ((vm[1] > 0) == (ref[1] > 0))
                a = m;
            else
                b = m;
        }
        double t = 0.5 * (a + b);
        out.max_fit_residual = std::max(out.max_fit_residual, offset_fit(surf, t, n_samples).residual);
        if (sphere) {
            t = std::fmod(t, 2 * kPi);
            if (t < 0)
                t += 2 * kPi;
        }
        out.t.push_back(t);
    }
    std::sort(out.t.begin(), out.t.end());
    if (sphere) {
        if (out.t.size() == 4) {
            for (int i = 0; i < 2; ++i)
                out.max_pair_error = std::max(out.max_pair_error, std::abs(out.t[i + 2] - out.t[i] - kPi));
        } else {
            out.max_pair_error = kInf;
        }
    }
    return out;
}

bool VerificationReport::all_pass() const
{
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

double default_tolerance(const std::string& name)
{
    static const std::map<std::string, double> tol = {
        {"elliptic/pythagorean", 1e-14},
        {"elliptic/derivatives", 1e-8},
        {"elliptic/periodicity", 1e-12},
        {"elliptic/rk4", 1e-9},
        {"elliptic/reciprocal_modulus", 1e-9},
        {"elliptic/imaginary_modulus", 1e-9},
        {"elliptic/imaginary_argument", 1e-9},
        {"elliptic/complete_integrals", 1e-11},
        {"elliptic/incomplete_integrals", 1e-11},
        {"elliptic/pi_quasi_periodicity", 1e-11},
        {"elliptic/pi_transforms", 1e-10},
        {"ode_residual", 1e-8},
        {"rk4_oracle", 1e-6},
        {"quadric", 1e-11},
        {"curvature", 5e-4},
        {"lemma", 1e-7},
        {"lemma_vs_fd", 5e-4},
        {"flat_fronts", 5e-4},
        {"lw_fit", 1e-6},
        {"bonnet", 1e-3},
        {"period", 1e-10},
        {"period/closure", 1e-7},
    };
    if (auto it = tol.find(name); it != tol.end())
        return it->second;
    const auto slash = name.find('/');
    if (slash != std::string::npos) {
        if (auto it = tol.find(name.substr(0, slash)); it != tol.end())
            return it->second;
    }
    throw DomainError("no tolerance for check '" + name + "'");
}

SuiteConfig default_suite()
{
    SuiteConfig c;
    c.checks = kCheckGroups;
    for (Row r : profile::all_rows())
        if (profile::row_space(r).kappa() == 1)
            c.rows.push_back(r);
    return c;
}

SuiteConfig full_suite()
{
    SuiteConfig c = default_suite();
    c.rows = profile::all_rows();
    return c;
}

namespace {

class Runner {
public:
    explicit Runner(const SuiteConfig& c) : cfg_(c), rng_(c.seed) {}

    VerificationReport run()
    {
        for (const std::string& g : cfg_.checks) {
            if (std::find(kCheckGroups.begin(), kCheckGroups.end(), g) == kCheckGroups.end())
                throw DomainError("unknown check group '" + g + "'");
        }
        auto enabled = [&](const char* g) {
            return std::find(cfg_.checks.begin(), cfg_.checks.end(), g) != cfg_.checks.end();
        };
        if (enabled("elliptic"))
            elliptic_checks();
        if (enabled("ode_residual"))
            for (Row r : cfg_.rows)
                ode_residual(r);
        if (enabled("rk4_oracle"))
            for (Row r : cfg_.rows)
                rk4_oracle(r);
        if (enabled("quadric"))
            for (Row r : cfg_.rows)
                quadric(r);
        if (enabled("curvature"))
            for (Row r : cfg_.rows)
                curvature(r);
        if (enabled("lemma")) {
            for (Row r : cfg_.rows)
                lemma(r);
            lemma_euclidean();
        }
        if (enabled("flat_fronts"))
            flat_fronts();
        if (enabled("lw_fit"))
            lw_fits();
        if (enabled("bonnet"))
            bonnet();
        if (enabled("period"))
            period();
        return std::move(report_);
    }

private:
    double tolerance(const std::string& name) const
    {
        if (auto it = cfg_.tolerances.find(name); it != cfg_.tolerances.end())
            return it->second;
        const auto slash = name.find('/');
        if (slash != std::string::npos) {
            if (auto it = cfg_.tolerances.find(name.substr(0, slash)); it != cfg_.tolerances.end())
                return it->second;
        }
        return default_tolerance(name);
    }

    // Runs body with a fresh accumulator; an escaping exception fails the check.
    void check(const std::string& name, const std::function<void(Acc&)>& body)
    {
        Check c;
        c.name = name;
        c.tolerance = tolerance(name);
        Acc acc;
        try {
            body(acc);
        } catch (const std::exception&) {
            acc.worst = kInf;
        }
        c.max_residual = acc.worst;
        c.n_samples = acc.n;
        c.pass = acc.worst <= c.tolerance;
        report_.checks.push_back(c);
    }

    std::vector<CaseParams> cases(Row row, int n)
    {
        auto v = case_grid(row, n);
        if (cfg_.mutation) {
            const double f = 1 + cfg_.mutation->relative;
            for (auto& cp : v) {
                const std::string& fld = cfg_.mutation->field;
                if (fld == "amp")
                    cp.amp *= f;
                else if (fld == "A")
                    cp.A *= f;
                else if (fld == "psi_lin")
                    cp.psi_lin *= f;
                else if (fld == "psi_coef")
                    cp.psi_coef *= f;
                else
                    throw DomainError("unknown mutation field '" + fld + "'");
            }
        }
        return v;
    }

    CaseParams middle_case(Row row)
    {
        auto v = case_grid(row, 1);
        if (v.empty())
            throw DomainError(std::string("no case for row ") + profile::row_name(row));
        return v.front();
    }

    void elliptic_checks();
    void ode_residual(Row row);
    void rk4_oracle(Row row);
    void quadric(Row row);
    void curvature(Row row);
    void lemma(Row row);
    void lemma_euclidean();
    void flat_fronts();
    void lw_fits();
    void bonnet();
    void period();

    const SuiteConfig& cfg_;
    std::mt19937_64 rng_;
    VerificationReport report_;
};

void Runner::elliptic_checks()
{
    using namespace elliptic;
    const int n = cfg_.elliptic_pairs;
    std::vector<std::pair<double, double>> sp(n);  // (s, p)
    for (auto& x : sp) {
        x.first = uniform(rng_, -6, 6);
        x.second = uniform(rng_, 0, 0.999);
    }
    // a few exact moduli at the ends of the range
    sp[0].second = 0;
    sp[1].second = 1;

    check("elliptic/pythagorean", [&](Acc& a) {
        for (auto [s, p] : sp) {
            const auto j = jacobi(s, p);
            a.add(std::max(std::abs(j.sn * j.sn + j.cn * j.cn - 1),
                           std::abs(j.dn * j.dn + p * p * j.sn * j.sn - 1)));
        }
    });
    check("elliptic/derivatives", [&](Acc& a) {
        const double h = 1e-5;
        for (auto [s, p] : sp) {
            const auto j = jacobi(s, p), u = jacobi(s + h, p), d = jacobi(s - h, p);
            a.add(std::max({std::abs((u.sn - d.sn) / (2 * h) - j.cn * j.dn),
                            std::abs((u.cn - d.cn) / (2 * h) + j.sn * j.dn),
                            std::abs((u.dn - d.dn) / (2 * h) + p * p * j.sn * j.cn),
                            std::abs((u.am - d.am) / (2 * h) - j.dn)}));
        }
    });
    check("elliptic/periodicity", [&](Acc& a) {
        for (auto [s, p] : sp) {
            if (p == 1)
                continue;
            const double F = complete_F(p);
            const auto j = jacobi(s, p), k = jacobi(s + 4 * F, p), l = jacobi(s + 2 * F, p);
            a.add(std::max({std::abs(k.sn - j.sn), std::abs(k.cn - j.cn), std::abs(l.dn - j.dn),
                            std::abs(l.sn + j.sn), std::abs(l.cn + j.cn),
                            std::abs(k.am - j.am - 2 * kPi) / (1 + std::abs(j.am))}));
        }
    });
    check("elliptic/rk4", [&](Acc& a) {
        for (auto [s, p] : sp) {
            const auto j = jacobi(s, p);
            const auto r = oracle::jacobi_rk4(p * p, s);
            a.add(std::max({std::abs(j.sn - r.sn), std::abs(j.cn - r.cn), std::abs(j.dn - r.dn)}));
        }
    });
    check("elliptic/reciprocal_modulus", [&](Acc& a) {
        for (auto [s, p] : sp) {
            const double P = 1 + 2 * p;
            if (P == 1)
                continue;
            const Modulus m(P);
            const auto r = oracle::jacobi_rk4(P * P, s);
            a.add(std::max({std::abs(jacobi_general(s, m, Ratio::sn) - r.sn),
                            std::abs(jacobi_general(s, m, Ratio::cn) - r.cn),
                            std::abs(jacobi_general(s, m, Ratio::dn) - r.dn)}));
        }
    });
    check("elliptic/imaginary_modulus", [&](Acc& a) {
        for (auto [s, p] : sp) {
            const double P = 3 * p;
            const Modulus m = Modulus::imaginary(P);
            const auto r = oracle::jacobi_rk4(-P * P, s);
            a.add(std::max({std::abs(jacobi_general(s, m, Ratio::sn) - r.sn),
                            std::abs(jacobi_general(s, m, Ratio::cn) - r.cn),
                            std::abs(jacobi_general(s, m, Ratio::dn) - r.dn)}));
        }
    });
    check("elliptic/imaginary_argument", [&](Acc& a) {
        for (auto [s, p] : sp) {
            // sn(i s) has its first pole at s = F_q; no pole when q = 1
            const double q = std::sqrt((1 - p) * (1 + p));
            if (q == 0)
                continue;
            const double t = s / 6 * 0.9 * (q == 1 ? 3.0 : complete_F(q));
            const Modulus m(p);
            const auto r = oracle::jacobi_imag_rk4(p, t);
            const auto sn = jacobi_imaginary_argument(t, m, Ratio::sn);
            const auto cn = jacobi_imaginary_argument(t, m, Ratio::cn);
            const auto dn = jacobi_imaginary_argument(t, m, Ratio::dn);
            const double scale = 1 + std::abs(r.cn);
            a.add(std::max({std::abs(sn.value - r.sn), std::abs(cn.value - r.cn),
                            std::abs(dn.value - r.dn)}) /
                  scale);
            a.add(sn.imaginary && !cn.imaginary && !dn.imaginary ? 0.0 : kInf);
        }
    });
    check("elliptic/complete_integrals", [&](Acc& a) {
        for (auto [s, p] : sp) {
            const double pp = std::min(p, 0.99);
            const double k = s / 6 * 2 - 1;  // in [-3, 1)
            const double kk = std::min(k, 0.9);
            a.add(std::abs(complete_F(pp) - oracle::complete_F_quad(pp)));
            a.add(std::abs(complete_E(pp) - oracle::complete_E_quad(pp)));
            a.add(std::abs(complete_Pi(kk, pp) - oracle::complete_Pi_quad(kk, pp)));
        }
    });
    check("elliptic/incomplete_integrals", [&](Acc& a) {
        for (auto [s, p] : sp) {
            const double pp = std::min(p, 0.99), phi = s / 2;
            const double k = std::min(0.9, uniform(rng_, -3, 1));
            auto w = [&](double u) { return std::sqrt(1 - pp * pp * std::sin(u) * std::sin(u)); };
            a.add(std::abs(detail::F_angle(phi, pp) - oracle::quad([&](double u) { return 1 / w(u); }, 0, phi)));
            a.add(std::abs(detail::E_angle(phi, pp) - oracle::quad(w, 0, phi)));
            a.add(std::abs(detail::Pi_angle(k, phi, pp) -
                           oracle::quad([&](double u) { return 1 / ((1 - k * std::sin(u) * std::sin(u)) * w(u)); },
                                        0, phi)));
        }
    });
    check("elliptic/pi_quasi_periodicity", [&](Acc& a) {
        for (auto [s, p] : sp) {
            if (p == 1)
                continue;
            const double k = std::min(0.9, uniform(rng_, -3, 1));
            const double F = complete_F(p), Pk = complete_Pi(k, p);
            for (int m = 1; m <= 3; ++m)
                a.add(std::abs(incomplete_Pi(k, p, s + 2 * m * F) - incomplete_Pi(k, p, s) - 2 * m * Pk) /
                      (1 + 2 * m * std::abs(Pk)));
        }
    });
    check("elliptic/pi_transforms", [&](Acc& a) {
        for (auto [s, p] : sp) {
            const double k = uniform(rng_, -2, 0.9), amp = uniform(rng_, 0.5, 1.5);
            const double x = s / 6 * 1.5;
            // reciprocal modulus P = 1/p
            const double pr = std::clamp(p, 0.05, 0.95);
            const Modulus mr(1 / pr);
            const double lhs_r = oracle::quad(
                [&](double u) {
                    const double sn = jacobi_general(u, mr, Ratio::sn);
                    return 1 / (1 - k * sn * sn);
                },
                0, amp * x);
            a.add(std::abs(pi_reciprocal_modulus(k, 1 / pr, amp, x) - lhs_r) / (1 + std::abs(lhs_r)));
            // imaginary modulus i P
            const double P = 3 * p;
            const Modulus mi = Modulus::imaginary(P);
            const double lhs_i = oracle::quad(
                [&](double u) {
                    const double sn = jacobi_general(u, mi, Ratio::sn);
                    return 1 / (1 - k * sn * sn);
                },
                0, amp * x);
            a.add(std::abs(pi_imaginary_modulus(k, P, amp, x) - lhs_i) / (1 + std::abs(lhs_i)));
            // imaginary argument: Pi(k; p | i v) = i int_0^v cn_q^2 / (cn_q^2 + k sn_q^2)
            const double q = std::sqrt((1 - pr) * (1 + pr));
            const double kp = std::abs(k) * 2;
            const double v = s / 6 * 0.9 * complete_F(q);
            const double lhs_a = oracle::quad(
                [&](double t) {
                    const auto j = jacobi(t, q);
                    return j.cn * j.cn / (j.cn * j.cn + kp * j.sn * j.sn);
                },
                0, v);
            const auto rhs = pi_imaginary_argument(kp, pr, 1.0, v);
            a.add(rhs.imaginary ? std::abs(rhs.value - lhs_a) / (1 + std::abs(lhs_a)) : kInf);
        }
    });
}

void Runner::ode_residual(Row row)
{
    check(std::string("ode_residual/") + profile::row_name(row), [&](Acc& a) {
        for (const CaseParams& cp : cases(row, cfg_.p_grid)) {
            const auto w = profile::natural_window(cp);
            for (int i = 0; i < cfg_.s_samples; ++i) {
                const double s = w.lo + (w.hi - w.lo) * (i + 0.5) / cfg_.s_samples;
                const auto res = profile::ode_residual(cp, s);
                a.add(std::max(std::abs(res.res_r) / (1 + std::abs(res.rhs_r)),
                               std::abs(res.res_psi) / (1 + std::abs(res.rhs_psi))));
            }
        }
    });
}

void Runner::rk4_oracle(Row row)
{
    check(std::string("rk4_oracle/") + profile::row_name(row), [&](Acc& a) {
        for (const CaseParams& cp : cases(row, 3)) {
            const auto w = profile::natural_window(cp);
            const auto p0 = profile::profile(cp, 0);
            profile::OdeOptions opt;
            opt.step = 1e-4 / cp.A;
            opt.dr0_sign = p0.dr < 0 ? -1 : 1;
            for (double end : {w.hi, w.lo}) {
                const auto path = profile::integrate_ode(cp.id, cp.C, p0.r, end, opt);
                double worst = 0;
                const std::size_t stride = std::max<std::size_t>(1, path.s.size() / 400);
                for (std::size_t i = 0; i < path.s.size(); i += stride) {
                    const auto ps = profile::profile(cp, path.s[i]);
                    worst = std::max({worst, std::abs(ps.r - path.r[i]), std::abs(ps.psi - path.psi[i])});
                }
                a.add(worst);
            }
        }
    });
}

void Runner::quadric(Row row)
{
    check(std::string("quadric/") + profile::row_name(row), [&](Acc& a) {
        const CaseParams cp = middle_case(row);
        const RotationalSurface surf(cp);
        const auto w = profile::natural_window(cp);
        const bool elliptic = cp.id.space.rotation() == profile::Rotation::elliptic;
        const double t_lo = elliptic ? 0 : -1, t_hi = elliptic ? 2 * kPi : 1;
        const int ns = cfg_.mesh_ns, nt = cfg_.mesh_ntheta;
        for (int i = 0; i < ns; ++i)
            for (int j = 0; j < nt; ++j) {
                const double s = w.lo + (w.hi - w.lo) * i / (ns - 1);
                const double th = t_lo + (t_hi - t_lo) * j / (nt - 1);
                a.add(surf.point(s, th).quadric_violation());
            }
    });
}

void Runner::curvature(Row row)
{
    check(std::string("curvature/") + profile::row_name(row), [&](Acc& a) {
        const CaseParams cp = middle_case(row);
        geometry::MeshOptions opt;
        opt.ns = cfg_.curvature_ns;
        opt.ntheta = cfg_.curvature_ntheta;
        const auto mesh = geometry::build_mesh(cp, opt);
        for (std::size_t v = 0; v < mesh.K_est.size(); ++v)
            if (std::isfinite(mesh.K_est[v]))
                a.add(std::abs(mesh.K_est[v] - cp.id.K));
        if (a.n == 0)
            throw SingularPoint("no regular vertex", 0, 0);
    });
}

constexpr double kLemmaMaxR = 1e3;

void Runner::lemma(Row row)
{
    const CaseParams cp = middle_case(row);
    const auto w = profile::natural_window(cp);
    const int n = 50;
    check(std::string("lemma/") + profile::row_name(row), [&](Acc& a) {
        for (int i = 0; i < n; ++i) {
            const double s = w.lo + (w.hi - w.lo) * (i + 0.5) / n;
            try {
                const auto m = moutard_from_sample(cp, s);
                // rounding in the lift form grows like eps R^2 near the axis
                if (std::abs(m.R) > kLemmaMaxR)
                    continue;
                a.add(std::abs(gauss_from_moutard(m, s) - cp.id.K));
            } catch (const SingularPoint&) {
            }
        }
    });
    check(std::string("lemma_vs_fd/") + profile::row_name(row), [&](Acc& a) {
        const RotationalSurface surf(cp);
        const Sampler f = [&](double s, double th) { return surf.point(s, th).x; };
        for (int i = 0; i < n; ++i) {
            const double s = w.lo + (w.hi - w.lo) * (i + 0.5) / n, th = 0.2;
            double lem;
            geometry::CurvatureEstimate e;
            try {
                lem = gauss_from_moutard(moutard_from_sample(cp, s), s);
                e = curvature_fd(f, surf.signature(), s, th, 1e-4, surf.normal(s, th));
            } catch (const SingularPoint&) {
                continue;
            }
            // points next to a cuspidal edge are not smooth samples
            if (e.K_err > 1e-5 * (1 + std::abs(e.K)))
                continue;
            a.add(std::abs(lem - e.K));
        }
    });
}

void Runner::lemma_euclidean()
{
    check("lemma/euclidean", [&](Acc& a) {
        const double K = 1, C = 0.5;
        const auto path = profile::integrate_ode(profile::kR3, K, C, std::sqrt(C / K), 6.0);
        for (std::size_t i = 0; i < path.s.size(); i += 500) {
            const double r = path.r[i], dr = path.dr[i];
            const double ddr = 0.5 * profile::rhs_r_slope(profile::kR3, K, C, r);
            const double dpsi = profile::rhs_psi(profile::kR3, K, C, r);
            const double ddpsi = 2 * K * r * dr;
            try {
                a.add(std::abs(gauss_from_moutard(moutard_from_profile(profile::kR3, r, dr, ddr, dpsi, ddpsi)) - K));
            } catch (const SingularPoint&) {
            }
        }
        // a cylinder: r and psi' constant
        a.add(std::abs(gauss_from_moutard(moutard_from_profile(profile::kR3, 0.7, 0, 0, 1.3, 0))));
    });
}

void Runner::flat_fronts()
{
    struct Front {
        const char* name;
        Row row;
        double param;
    };
    const Front fronts[] = {
        {"clifford", Row::s3_clifford, 0.6}, {"s3_flat", Row::s3_flat, 0.6},
        {"peach", Row::h3h_peach, 0.8},      {"snowman", Row::h3e_snowman, 0.7},
        {"hourglass", Row::h3e_hourglass, 0.7}, {"h3p_flat", Row::h3p_flat, 0.8},
    };
    for (const Front& f : fronts) {
        check(std::string("flat_fronts/") + f.name, [&](Acc& a) {
            const int kappa = profile::row_space(f.row).kappa();
            const CaseParams cp = profile::make_params(profile::branch_of(f.row, -kappa).id, f.param);
            geometry::MeshOptions opt;
            opt.ns = cfg_.curvature_ns;
            opt.ntheta = cfg_.curvature_ntheta;
            const auto mesh = geometry::build_mesh(cp, opt);
            for (double k : mesh.K_est)
                if (std::isfinite(k))
                    a.add(std::abs(k + kappa));
            if (a.n == 0)
                throw SingularPoint("no regular vertex", 0, 0);
        });
    }
}

void Runner::lw_fits()
{
    struct Offset {
        const char* name;
        Row row;
        double K, p, t;
    };
    const Offset offsets[] = {
        {"s3_pos_dn_t0.4", Row::s3_pos_dn, 1, 0.5, 0.4},
        {"s3_pos_cn_t1.1", Row::s3_pos_cn, 1, 0.5, 1.1},
        {"h3e_pos_cn_t0.3", Row::h3e_pos_cn, 2, 0.5, 0.3},
        {"h3h_pos_dn_t0.2", Row::h3h_pos_dn, 2, 0.4, 0.2},
    };
    for (const Offset& o : offsets) {
        check(std::string("lw_fit/") + o.name, [&](Acc& a) {
            const CaseParams cp = profile::make_params(profile::branch_of(o.row, o.K).id, o.p);
            const RotationalSurface surf(cp);
            const auto fit = offset_fit(surf, o.t, 40);
            a.add(fit.degenerate ? kInf : fit.residual);
        });
    }
}

void Runner::bonnet()
{
    check("bonnet/s3_pos_dn", [&](Acc& a) {
        const CaseParams cp = profile::make_params(profile::branch_of(Row::s3_pos_dn, 1).id, 0.5);
        const auto scan = bonnet_scan(cp);
        a.add(scan.t.size() == 4 ? scan.max_pair_error : kInf);
    });
}

void Runner::period()
{
    const double K = -1;
    check("period/zero_at_pole", [&](Acc& a) {
        for (int n = 1; n <= 50; ++n)
            a.add(std::abs(geometry::period_function(K, n, geometry::period_p_max(K))));
    });
    int n = 1;
    geometry::PeriodSolution sol{};
    check("period/root", [&](Acc& a) {
        for (;; ++n) {
            try {
                sol = geometry::period_solve(K, n);
                break;
            } catch (const NoClosedCurve&) {
                if (n > 1000)
                    throw;
            }
        }
        a.add(sol.residual);
        a.add(sol.sign_changes == 1 ? 0.0 : kInf);
    });
    check("period/closure", [&](Acc& a) {
        const CaseParams cp = profile::make_params(profile::branch_of(Row::h3h_neg_dn, K).id, sol.p);
        const double X = n * sol.profile_period;
        for (int i = 0; i < 50; ++i) {
            const double s = sol.profile_period * i / 50;
            const auto u = profile::profile(cp, s), v = profile::profile(cp, s + X);
            a.add(std::max({std::abs(u.r - v.r), std::abs(std::cos(u.psi) - std::cos(v.psi)),
                            std::abs(std::sin(u.psi) - std::sin(v.psi))}));
        }
    });
}

}  // namespace

VerificationReport run_suite(const SuiteConfig& config)
{
    return Runner(config).run();
}

}  // namespace cgc::verify
