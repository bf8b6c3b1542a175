// siftlab command-line front door: every library operation as a subcommand,
// parameter sweeps, CSV/JSON report emission.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "siftlab/siftlab.hpp"

namespace {

using namespace siftlab;

struct GlobalOptions {
    std::string format = "csv";
    std::string out_path;
    int threads = 1;
    uint64_t segment_length = 1u << 20;
    double sieve_cap = 1e10;

    SieveConfig sieve() const {
        SieveConfig cfg;
        cfg.threads = threads;
        cfg.segment_length = segment_length;
        cfg.range_cap = static_cast<uint64_t>(sieve_cap);
        return cfg;
    }
};

/// Accepts plain numbers and scientific notation.
double parse_real(const std::string& s) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw config_error("trailing characters in number: " + s);
        return v;
    } catch (const std::invalid_argument&) {
        throw config_error("not a number: " + s);
    } catch (const std::out_of_range&) {
        throw config_error("number out of range: " + s);
    }
}

/// "3,4,5" -> {3,4,5}; "1e5:1e8:x10" -> geometric range {1e5,1e6,1e7,1e8}.
std::vector<double> parse_number_list(const std::string& spec) {
    std::vector<double> out;
    if (spec.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(spec);
        std::string tok;
        while (std::getline(ss, tok, ':')) parts.push_back(tok);
        if (parts.size() != 3 || parts[2].empty() || parts[2][0] != 'x')
            throw config_error("range syntax is lo:hi:xfactor, got: " + spec);
        double lo = parse_real(parts[0]);
        double hi = parse_real(parts[1]);
        double factor = parse_real(parts[2].substr(1));
        if (!(lo > 0.0) || !(factor > 1.0) || !(hi >= lo))
            throw config_error("range needs 0 < lo <= hi and factor > 1: " + spec);
        for (double v = lo; v <= hi * (1.0 + 1e-12); v *= factor) out.push_back(v);
        return out;
    }
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(parse_real(tok));
    if (out.empty()) throw config_error("empty number list");
    return out;
}

/// "n:re[:im],n:re[:im],..." -> finite Dirichlet polynomial.
DirichletPolynomial parse_polynomial(const std::string& spec, const std::string& label) {
    DirichletPolynomial p(label);
    std::stringstream ss(spec);
    std::string term;
    while (std::getline(ss, term, ',')) {
        std::vector<std::string> parts;
        std::stringstream ts(term);
        std::string tok;
        while (std::getline(ts, tok, ':')) parts.push_back(tok);
        if (parts.size() < 2 || parts.size() > 3)
            throw config_error("polynomial term must be n:re[:im], got: " + term);
        auto n = static_cast<uint64_t>(parse_real(parts[0]));
        double re = parse_real(parts[1]);
        double im = parts.size() == 3 ? parse_real(parts[2]) : 0.0;
        p.add(n, {re, im});
    }
    if (p.empty()) throw config_error("empty polynomial spec");
    return p;
}

std::string join_exponents(const std::vector<uint32_t>& exps) {
    std::string s;
    for (size_t i = 0; i < exps.size(); ++i) {
        if (i) s += ';';
        s += std::to_string(exps[i]);
    }
    return s;
}

DirichletCharacter character_by_index(uint64_t q, int index) {
    auto chars = enumerate_characters(build_unit_group(q));
    if (index < 0 || static_cast<size_t>(index) >= chars.size())
        throw config_error("character index out of range for this modulus");
    return chars[static_cast<size_t>(index)];
}

void probe_columns(ReportTable& table) {
    table.columns({"q", "a", "x", "y", "paper_y_feasible", "psi_ap", "main", "psi_term", "E",
                   "normalized", "psi_char_sum", "envelope1", "envelope2", "bound_shape1",
                   "bound_shape2", "in_range_qB", "C1_hat", "C2_hat", "cprime_hat",
                   "cdprime_hat", "L_const", "M_prime", "B", "delta", "T", "ell", "c", "D"});
}

void probe_row(ReportTable& table, const TheoremProbeReport& r) {
    table.row({Cell::of(r.q), Cell::of(r.a), Cell::of(r.x), Cell::of(r.schedule.y),
               Cell::of(r.schedule.paper_y_feasible), Cell::of(r.psi_ap_value), Cell::of(r.main),
               Cell::of(r.psi_term), Cell::of(r.E), Cell::of(r.normalized),
               Cell::of(r.psi_char_sum), Cell::of(r.envelope1), Cell::of(r.envelope2),
               Cell::of(r.bound_shape1), Cell::of(r.bound_shape2), Cell::of(r.in_range_qB),
               Cell::of(r.constants.C1_hat), Cell::of(r.constants.C2_hat),
               Cell::of(r.constants.c_prime_hat), Cell::of(r.constants.c_dprime_hat),
               Cell::of(r.constants.L_const), Cell::of(r.constants.M_prime),
               Cell::of(r.constants.B_range), Cell::of(r.schedule.delta), Cell::of(r.schedule.T),
               Cell::of(r.schedule.ell), Cell::of(r.schedule.c), Cell::of(r.schedule.D)});
}

/// The envelope/bound constants every probe row carries; shared by probe and sweep.
void add_constant_flags(CLI::App* cmd, const std::shared_ptr<ProbeConstants>& pc) {
    cmd->add_option("--c1-hat", pc->C1_hat, "first envelope constant");
    cmd->add_option("--c2-hat", pc->C2_hat, "second envelope constant");
    cmd->add_option("--cprime-hat", pc->c_prime_hat, "character-sum bound shape constant");
    cmd->add_option("--cdprime-hat", pc->c_dprime_hat, "character-sum bound shape constant");
    cmd->add_option("--L", pc->L_const, "constant in the T exponent");
    cmd->add_option("--mprime", pc->M_prime, "constant M'");
    cmd->add_option("--B", pc->B_range, "reported range exponent x >= q^B");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"siftlab: character sums, sifted sums, L-series, and progression error probes"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand
    app.set_config("--config", "", "line-oriented key = value configuration file");

    GlobalOptions go;
    if (const char* env = std::getenv("SIFTLAB_THREADS")) {
        try { go.threads = std::max(1, std::stoi(env)); } catch (...) {}
    }
    app.add_option("--format", go.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_option("--out", go.out_path, "output path (default: stdout)");
    app.add_option("--threads", go.threads, "worker threads for segmented passes")
        ->check(CLI::PositiveNumber);
    app.add_option("--seg-len", go.segment_length, "sieve segment length")
        ->check(CLI::PositiveNumber);
    app.add_option("--sieve-cap", go.sieve_cap, "largest admissible sieve range");

    ReportTable table;
    std::function<void()> run;

    // ---- group ----------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("group", "unit group structure of (Z/qZ)*");
        auto q = std::make_shared<uint64_t>(0);
        auto cap = std::make_shared<double>(1e6);
        cmd->add_option("--q", *q, "modulus")->required();
        cmd->add_option("--cap", *cap, "modulus cap (dlog table memory)");
        cmd->callback([&, q, cap] {
            run = [&, q, cap] {
                auto g = build_unit_group(*q, static_cast<uint64_t>(*cap));
                table.meta("q", Cell::of(*q));
                table.meta("phi", Cell::of(g->phi()));
                table.columns({"q", "component", "generator", "order", "phi"});
                auto comps = g->components();
                for (size_t i = 0; i < comps.size(); ++i)
                    table.row({Cell::of(*q), Cell::of(static_cast<uint64_t>(i)),
                               Cell::of(comps[i].generator), Cell::of(comps[i].order),
                               Cell::of(g->phi())});
            };
        });
    }

    // ---- chars ----------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("chars", "enumerate the Dirichlet characters mod q");
        auto q = std::make_shared<uint64_t>(0);
        cmd->add_option("--q", *q, "modulus")->required();
        cmd->callback([&, q] {
            run = [&, q] {
                auto chars = enumerate_characters(build_unit_group(*q));
                table.meta("q", Cell::of(*q));
                table.columns({"q", "chi", "exponents", "order", "principal", "real"});
                for (size_t i = 0; i < chars.size(); ++i) {
                    const auto& c = chars[i];
                    table.row({Cell::of(*q), Cell::of(static_cast<uint64_t>(i)),
                               Cell::of(join_exponents(c.exponents())), Cell::of(c.order()),
                               Cell::of(c.is_principal()), Cell::of(c.is_real())});
                }
            };
        });
    }

    // ---- psi-ap ---------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("psi-ap", "Chebyshev psi(x; q, a)");
        auto q = std::make_shared<uint64_t>(1);
        auto a = std::make_shared<uint64_t>(1);
        auto x = std::make_shared<std::string>();
        cmd->add_option("--q", *q, "modulus")->required();
        cmd->add_option("--a", *a, "residue class")->required();
        cmd->add_option("--x", *x, "upper bound")->required();
        cmd->callback([&, q, a, x] {
            run = [&, q, a, x] {
                double xv = parse_real(*x);
                double v = psi_ap(static_cast<uint64_t>(xv), *q, *a, go.sieve());
                table.columns({"q", "a", "x", "psi_ap"});
                table.row({Cell::of(*q), Cell::of(*a), Cell::of(xv), Cell::of(v)});
            };
        });
    }

    // ---- rough ----------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("rough", "y-rough integers up to x");
        auto x = std::make_shared<std::string>();
        auto y = std::make_shared<std::string>();
        auto list = std::make_shared<uint64_t>(0);
        cmd->add_option("--x", *x, "upper bound")->required();
        cmd->add_option("--y", *y, "roughness threshold")->required();
        cmd->add_option("--list", *list, "emit the first N values as rows instead of the count");
        cmd->callback([&, x, y, list] {
            run = [&, x, y, list] {
                double xv = parse_real(*x), yv = parse_real(*y);
                if (*list > 0) {
                    table.columns({"x", "y", "n"});
                    uint64_t emitted = 0;
                    for_each_rough(static_cast<uint64_t>(xv), yv, [&](uint64_t n) {
                        if (emitted++ < *list)
                            table.row({Cell::of(xv), Cell::of(yv), Cell::of(n)});
                    }, go.sieve());
                } else {
                    table.columns({"x", "y", "count"});
                    table.row({Cell::of(xv), Cell::of(yv),
                               Cell::of(rough_count(static_cast<uint64_t>(xv), yv, go.sieve()))});
                }
            };
        });
    }

    // ---- verify-lemma ---------------------------------------------------
    {
        auto* cmd = app.add_subcommand("verify-lemma",
                                       "sifted sum against its main term and envelope");
        auto kind = std::make_shared<std::string>("ap");
        auto x = std::make_shared<std::string>();
        auto y = std::make_shared<std::string>();
        auto q = std::make_shared<uint64_t>(1);
        auto a = std::make_shared<uint64_t>(1);
        auto chi = std::make_shared<int>(0);
        auto j = std::make_shared<int>(0);
        auto chat = std::make_shared<double>(1.0);
        auto kappa = std::make_shared<double>(0.1);
        cmd->add_option("--kind", *kind, "character or ap")
            ->check(CLI::IsMember({"character", "ap"}));
        cmd->add_option("--x", *x)->required();
        cmd->add_option("--y", *y)->required();
        cmd->add_option("--q", *q)->required();
        cmd->add_option("--a", *a, "residue (ap kind)");
        cmd->add_option("--chi", *chi, "character index (character kind)");
        cmd->add_option("--j", *j, "log power");
        cmd->add_option("--c-hat", *chat, "envelope constant");
        cmd->add_option("--kappa-hat", *kappa, "envelope exponent constant");
        cmd->callback([&, kind, x, y, q, a, chi, j, chat, kappa] {
            run = [&, kind, x, y, q, a, chi, j, chat, kappa] {
                double xv = parse_real(*x), yv = parse_real(*y);
                SiftedSumReport rep =
                    *kind == "character"
                        ? verify_sifted_lemma(character_by_index(*q, *chi), *chi, xv, yv, *j,
                                              *chat, *kappa, go.sieve())
                        : verify_sifted_lemma(xv, yv, *q, *a, *j, *chat, *kappa, go.sieve());
                table.columns({"kind", "q", "a_or_chi", "x", "y", "j", "actual", "main",
                               "abs_err", "rel_err", "envelope", "envelope_constant",
                               "kappa_hat"});
                table.row({Cell::of(*kind), Cell::of(rep.q),
                           rep.kind == SiftedKind::ap ? Cell::of(rep.a)
                                                      : Cell::of(static_cast<long long>(rep.chi_index)),
                           Cell::of(rep.x), Cell::of(rep.y), Cell::of(rep.j),
                           Cell::of(rep.actual), Cell::of(rep.main_term), Cell::of(rep.abs_error),
                           Cell::of(rep.rel_error), Cell::of(rep.envelope),
                           Cell::of(rep.envelope_constant), Cell::of(rep.kappa_hat)});
            };
        });
    }

    // ---- shiu -----------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("shiu", "short-window AP ratio for multiplicative f");
        auto f = std::make_shared<std::string>("one");
        auto x = std::make_shared<std::string>();
        auto window = std::make_shared<std::string>();
        auto q = std::make_shared<uint64_t>(1);
        auto a = std::make_shared<uint64_t>(1);
        auto y = std::make_shared<double>(10.0);
        auto eps = std::make_shared<double>(0.1);
        cmd->add_option("--f", *f, "one | rough | tau2")
            ->check(CLI::IsMember({"one", "rough", "tau2"}));
        cmd->add_option("--x", *x)->required();
        cmd->add_option("--window", *window)->required();
        cmd->add_option("--q", *q)->required();
        cmd->add_option("--a", *a)->required();
        cmd->add_option("--y", *y, "roughness threshold for f = rough");
        cmd->add_option("--epsilon", *eps, "range condition window/q >= x^epsilon");
        cmd->callback([&, f, x, window, q, a, y, eps] {
            run = [&, f, x, window, q, a, y, eps] {
                ShiuSpec spec = *f == "one" ? shiu_one()
                                : *f == "rough" ? shiu_rough_indicator(*y)
                                                : shiu_tau2();
                auto rep = shiu_ratio(spec, parse_real(*x), parse_real(*window), *q, *a, *eps,
                                      go.sieve());
                table.columns({"f", "m", "q", "a", "x", "window", "epsilon", "lhs", "rhs",
                               "ratio", "prime_sum", "terms"});
                table.row({Cell::of(spec.name), Cell::of(static_cast<long long>(spec.m)),
                           Cell::of(*q), Cell::of(*a), Cell::of(parse_real(*x)),
                           Cell::of(parse_real(*window)), Cell::of(*eps), Cell::of(rep.lhs),
                           Cell::of(rep.rhs), Cell::of(rep.ratio), Cell::of(rep.prime_sum),
                           Cell::of(rep.terms)});
            };
        });
    }

    // ---- lvalue / lrough -------------------------------------------------
    {
        auto* cmd = app.add_subcommand("lvalue", "L(s, chi)");
        auto q = std::make_shared<uint64_t>(1);
        auto chi = std::make_shared<int>(0);
        auto sigma = std::make_shared<double>(2.0);
        auto t = std::make_shared<double>(0.0);
        cmd->add_option("--q", *q)->required();
        cmd->add_option("--chi", *chi, "character index");
        cmd->add_option("--sigma", *sigma);
        cmd->add_option("--t", *t);
        cmd->callback([&, q, chi, sigma, t] {
            run = [&, q, chi, sigma, t] {
                auto v = dirichlet_l({*sigma, *t}, character_by_index(*q, *chi));
                table.columns({"q", "chi", "sigma", "t", "re", "im"});
                table.row({Cell::of(*q), Cell::of(static_cast<long long>(*chi)),
                           Cell::of(*sigma), Cell::of(*t), Cell::of(v.real()),
                           Cell::of(v.imag())});
            };
        });
    }
    {
        auto* cmd = app.add_subcommand("lrough", "y-rough series L_y(s, chi), optionally a derivative");
        auto q = std::make_shared<uint64_t>(1);
        auto chi = std::make_shared<int>(0);
        auto y = std::make_shared<std::string>();
        auto sigma = std::make_shared<double>(2.0);
        auto t = std::make_shared<double>(0.0);
        auto k = std::make_shared<int>(0);
        cmd->add_option("--q", *q)->required();
        cmd->add_option("--chi", *chi);
        cmd->add_option("--y", *y)->required();
        cmd->add_option("--sigma", *sigma);
        cmd->add_option("--t", *t);
        cmd->add_option("--deriv", *k, "derivative order");
        cmd->callback([&, q, chi, y, sigma, t, k] {
            run = [&, q, chi, y, sigma, t, k] {
                auto c = character_by_index(*q, *chi);
                auto d = l_rough_deriv({*sigma, *t}, c, parse_real(*y), *k, {}, go.sieve());
                table.columns({"q", "chi", "y", "sigma", "t", "k", "re", "im",
                               "precision_warning"});
                table.row({Cell::of(*q), Cell::of(static_cast<long long>(*chi)),
                           Cell::of(parse_real(*y)), Cell::of(*sigma), Cell::of(*t),
                           Cell::of(static_cast<long long>(*k)), Cell::of(d.value.real()),
                           Cell::of(d.value.imag()), Cell::of(d.precision_warning)});
            };
        });
    }

    // ---- exceptional ------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("exceptional",
                                       "minimizer of L_q(1, chi) over the real non-principal chi");
        auto q = std::make_shared<uint64_t>(1);
        cmd->add_option("--q", *q)->required();
        cmd->callback([&, q] {
            run = [&, q] {
                auto exc = find_exceptional(*q, {}, go.sieve());
                table.meta("q", Cell::of(*q));
                table.meta("psi_present", Cell::of(exc.psi.has_value()));
                if (exc.psi) {
                    table.meta("psi_exponents", Cell::of(join_exponents(exc.psi->exponents())));
                    table.meta("lq1_psi", Cell::of(exc.value));
                }
                table.columns({"q", "exponents", "order", "lq1", "is_psi"});
                for (const auto& [chi, val] : exc.all_values)
                    table.row({Cell::of(*q), Cell::of(join_exponents(chi.exponents())),
                               Cell::of(chi.order()), Cell::of(val),
                               Cell::of(exc.psi && chi == *exc.psi)});
            };
        });
    }

    // ---- siegel-scan ------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("siegel-scan", "real-zero scan of L(sigma, psi)");
        auto q = std::make_shared<uint64_t>(1);
        auto lo = std::make_shared<double>(0.85);
        auto hi = std::make_shared<double>(1.0);
        auto grid = std::make_shared<int>(512);
        cmd->add_option("--q", *q)->required();
        cmd->add_option("--lo", *lo);
        cmd->add_option("--hi", *hi);
        cmd->add_option("--grid", *grid);
        cmd->callback([&, q, lo, hi, grid] {
            run = [&, q, lo, hi, grid] {
                auto rep = siegel_zero_scan(*q, *lo, *hi, *grid, {}, go.sieve());
                table.columns({"q", "window_lo", "window_hi", "grid", "zero_index", "zero",
                               "beta_hat", "lq1_psi", "ratio", "anomaly"});
                if (rep.zeros.empty()) {
                    table.row({Cell::of(*q), Cell::of(*lo), Cell::of(*hi),
                               Cell::of(static_cast<long long>(*grid)), Cell::null(), Cell::null(),
                               Cell::of(rep.beta_hat), Cell::of(rep.l_q_one_psi),
                               Cell::of(rep.ratio), Cell::of(rep.anomaly)});
                } else {
                    for (size_t i = 0; i < rep.zeros.size(); ++i)
                        table.row({Cell::of(*q), Cell::of(*lo), Cell::of(*hi),
                                   Cell::of(static_cast<long long>(*grid)),
                                   Cell::of(static_cast<uint64_t>(i)), Cell::of(rep.zeros[i]),
                                   Cell::of(rep.beta_hat), Cell::of(rep.l_q_one_psi),
                                   Cell::of(rep.ratio), Cell::of(rep.anomaly)});
                }
            };
        });
    }

    // ---- lbounds ----------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("lbounds",
                                       "grid measurements of |L_y^{(j)}| per character class");
        auto q = std::make_shared<uint64_t>(1);
        auto y = std::make_shared<std::string>();
        auto sigmas = std::make_shared<std::string>("1.1,1.5,2.0");
        auto ts = std::make_shared<std::string>("0,1");
        auto jmax = std::make_shared<int>(2);
        cmd->add_option("--q", *q)->required();
        cmd->add_option("--y", *y)->required();
        cmd->add_option("--sigma", *sigmas, "sigma grid, comma separated, in (1, 2]");
        cmd->add_option("--t", *ts, "t grid, comma separated");
        cmd->add_option("--jmax", *jmax);
        cmd->callback([&, q, y, sigmas, ts, jmax] {
            run = [&, q, y, sigmas, ts, jmax] {
                auto tab = measure_lseries_bounds(*q, parse_real(*y), parse_number_list(*sigmas),
                                                  parse_number_list(*ts), *jmax, {}, go.sieve());
                table.meta("q", Cell::of(*q));
                table.meta("y", Cell::of(parse_real(*y)));
                table.meta("hypothesis_met", Cell::of(tab.hypothesis_met));
                table.meta("note", Cell::of("y is far below q*V_t at desk scale; rows are measured "
                                            "constants, not verified bounds"));
                for (const auto& s : tab.summaries) {
                    table.meta("min_abs[" + s.cls + "]", Cell::of(s.min_abs));
                    table.meta("max_deriv_ratio[" + s.cls + "]", Cell::of(s.max_deriv_ratio));
                    if (s.l_y_at_one) table.meta("min_Ly_at_1[" + s.cls + "]", Cell::of(*s.l_y_at_one));
                }
                table.columns({"q", "y", "class", "chi", "sigma", "t", "j", "value",
                               "hypothesis_met"});
                for (const auto& r : tab.rows)
                    table.row({Cell::of(*q), Cell::of(tab.y), Cell::of(char_class_name(r.cls)),
                               Cell::of(static_cast<long long>(r.chi_index)), Cell::of(r.sigma),
                               Cell::of(r.t), Cell::of(r.j), Cell::of(r.value),
                               Cell::of(tab.hypothesis_met)});
            };
        });
    }

    // ---- meansq -----------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("meansq", "windowed mean square of a Dirichlet polynomial");
        auto terms = std::make_shared<std::string>();
        auto sigma = std::make_shared<double>(1.0);
        auto t1 = std::make_shared<double>(0.0);
        auto t2 = std::make_shared<double>(1.0);
        auto weight = std::make_shared<std::string>("flat");
        cmd->add_option("--terms", *terms, "n:re[:im],... coefficients")->required();
        cmd->add_option("--sigma", *sigma);
        cmd->add_option("--t1", *t1);
        cmd->add_option("--t2", *t2);
        cmd->add_option("--weight", *weight)->check(CLI::IsMember({"flat", "invt2"}));
        cmd->callback([&, terms, sigma, t1, t2, weight] {
            run = [&, terms, sigma, t1, t2, weight] {
                auto P = parse_polynomial(*terms, "cli");
                auto w = *weight == "flat" ? MeanSquareWeight::flat
                                           : MeanSquareWeight::inverse_t_squared;
                double v = mean_square_window(P, *sigma, *t1, *t2, w);
                table.columns({"terms", "sigma", "t1", "t2", "weight", "value"});
                table.row({Cell::of(static_cast<uint64_t>(P.size())), Cell::of(*sigma),
                           Cell::of(*t1), Cell::of(*t2), Cell::of(*weight), Cell::of(v)});
            };
        });
    }

    // ---- montgomery ---------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("montgomery", "majorant mean-value inequality check");
        auto ta = std::make_shared<std::string>();
        auto tb = std::make_shared<std::string>();
        auto sigma = std::make_shared<double>(1.5);
        auto T = std::make_shared<double>(5.0);
        cmd->add_option("--terms-a", *ta, "coefficients of A")->required();
        cmd->add_option("--terms-b", *tb, "majorant coefficients of B")->required();
        cmd->add_option("--sigma", *sigma);
        cmd->add_option("--T", *T);
        cmd->callback([&, ta, tb, sigma, T] {
            run = [&, ta, tb, sigma, T] {
                auto res = montgomery_check(parse_polynomial(*ta, "A"),
                                            parse_polynomial(*tb, "B"), *sigma, *T);
                table.columns({"sigma", "T", "lhs", "rhs", "pass"});
                table.row({Cell::of(*sigma), Cell::of(*T), Cell::of(res.lhs), Cell::of(res.rhs),
                           Cell::of(res.pass)});
            };
        });
    }

    // ---- mvt ---------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("mvt", "mean-value probe of the sifted Lambda-series");
        auto q = std::make_shared<uint64_t>(3);
        auto a = std::make_shared<uint64_t>(1);
        auto y = std::make_shared<std::string>();
        auto sigma = std::make_shared<double>(1.1);
        auto j = std::make_shared<int>(0);
        auto T = std::make_shared<double>(1.0);
        auto tmax = std::make_shared<double>(0.0);
        auto ntrunc = std::make_shared<std::string>("1e6");
        cmd->add_option("--q", *q)->required();
        cmd->add_option("--a", *a)->required();
        cmd->add_option("--y", *y)->required();
        cmd->add_option("--sigma", *sigma);
        cmd->add_option("--j", *j);
        cmd->add_option("--T", *T);
        cmd->add_option("--tmax", *tmax, "defaults to 10 T");
        cmd->add_option("--ntrunc", *ntrunc, "series truncation");
        cmd->callback([&, q, a, y, sigma, j, T, tmax, ntrunc] {
            run = [&, q, a, y, sigma, j, T, tmax, ntrunc] {
                auto res = mvt_probe(*q, *a, parse_real(*y), *sigma, *j, *T, *tmax,
                                     static_cast<uint64_t>(parse_real(*ntrunc)), 1e-7,
                                     go.sieve());
                table.columns({"q", "a", "y", "sigma", "j", "T", "T_max", "n_trunc", "n_terms",
                               "lhs_truncated", "rhs_bound", "ratio", "tail_bound"});
                table.row({Cell::of(res.q), Cell::of(res.a), Cell::of(res.y),
                           Cell::of(res.sigma), Cell::of(res.j), Cell::of(res.T),
                           Cell::of(res.T_max), Cell::of(res.n_trunc), Cell::of(res.n_terms),
                           Cell::of(res.lhs_truncated), Cell::of(res.rhs_bound),
                           Cell::of(res.ratio), Cell::of(res.tail_bound)});
            };
        });
    }

    // ---- kn ----------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("kn", "K/N sandwich data for a Dirichlet polynomial");
        auto terms = std::make_shared<std::string>();
        auto sigma = std::make_shared<double>(2.0);
        auto t = std::make_shared<double>(0.0);
        auto k = std::make_shared<int>(3);
        cmd->add_option("--terms", *terms)->required();
        cmd->add_option("--sigma", *sigma);
        cmd->add_option("--t", *t);
        cmd->add_option("--k", *k);
        cmd->callback([&, terms, sigma, t, k] {
            run = [&, terms, sigma, t, k] {
                auto F = parse_polynomial(*terms, "F");
                auto rec = taylor_log_deriv_KN(F, {*sigma, *t}, *k);
                bool holds = rec.K / 2.0 - 1e-9 * std::max(1.0, rec.K) <= rec.N &&
                             rec.N <= 2.0 * rec.K + 1e-9 * std::max(1.0, rec.K);
                table.columns({"sigma", "t", "k", "K", "N", "sandwich_holds", "abs_F"});
                table.row({Cell::of(*sigma), Cell::of(*t), Cell::of(rec.k), Cell::of(rec.K),
                           Cell::of(rec.N), Cell::of(holds), Cell::of(std::abs(rec.taylor[0]))});
            };
        });
    }

    // ---- delta -------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("delta", "discrepancy functional Delta or Delta*");
        auto u = std::make_shared<std::string>();
        auto y = std::make_shared<std::string>();
        auto q = std::make_shared<uint64_t>(3);
        auto b = std::make_shared<uint64_t>(1);
        auto star = std::make_shared<bool>(false);
        cmd->add_option("--u", *u)->required();
        cmd->add_option("--y", *y)->required();
        cmd->add_option("--q", *q)->required();
        cmd->add_option("--b", *b)->required();
        cmd->add_flag("--star", *star, "unit weights instead of Lambda weights");
        cmd->callback([&, u, y, q, b, star] {
            run = [&, u, y, q, b, star] {
                auto exc = find_exceptional(*q, {}, go.sieve());
                DeltaInput in{parse_real(*u), parse_real(*y), *q, *b, exc.psi};
                double v = *star ? delta_star(in, go.sieve()) : delta(in, go.sieve());
                table.columns({"q", "b", "u", "y", "star", "psi_present", "value"});
                table.row({Cell::of(*q), Cell::of(*b), Cell::of(in.u), Cell::of(in.y),
                           Cell::of(*star), Cell::of(exc.psi.has_value()), Cell::of(v)});
            };
        });
    }

    // ---- identity ------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("identity", "bilinear convolution identity residual");
        auto x = std::make_shared<std::string>();
        auto y = std::make_shared<std::string>();
        auto q = std::make_shared<uint64_t>(3);
        auto a = std::make_shared<uint64_t>(1);
        cmd->add_option("--x", *x)->required();
        cmd->add_option("--y", *y)->required();
        cmd->add_option("--q", *q)->required();
        cmd->add_option("--a", *a)->required();
        cmd->callback([&, x, y, q, a] {
            run = [&, x, y, q, a] {
                auto res = hybrid_identity_residual(parse_real(*x), *q, *a, parse_real(*y),
                                                    go.sieve());
                table.columns({"q", "a", "x", "y", "lhs", "rhs", "residual", "relative"});
                table.row({Cell::of(res.q), Cell::of(res.a), Cell::of(res.x), Cell::of(res.y),
                           Cell::of(res.lhs), Cell::of(res.rhs), Cell::of(res.residual),
                           Cell::of(res.relative)});
            };
        });
    }

    // ---- recursion -------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("recursion", "recursion residual for Delta");
        auto x = std::make_shared<std::string>();
        auto y = std::make_shared<std::string>();
        auto q = std::make_shared<uint64_t>(3);
        auto a = std::make_shared<uint64_t>(1);
        auto c2 = std::make_shared<double>(0.1);
        cmd->add_option("--x", *x)->required();
        cmd->add_option("--y", *y)->required();
        cmd->add_option("--q", *q)->required();
        cmd->add_option("--a", *a)->required();
        cmd->add_option("--c2-hat", *c2);
        cmd->callback([&, x, y, q, a, c2] {
            run = [&, x, y, q, a, c2] {
                auto res = recursion_residual(parse_real(*x), *q, *a, parse_real(*y), *c2,
                                              go.sieve());
                table.columns({"q", "a", "x", "y", "c2_hat", "delta_x", "neighbor_sum",
                               "residual", "normalized"});
                table.row({Cell::of(res.q), Cell::of(res.a), Cell::of(res.x), Cell::of(res.y),
                           Cell::of(res.c2_hat), Cell::of(res.delta_x),
                           Cell::of(res.neighbor_sum), Cell::of(res.residual),
                           Cell::of(res.normalized)});
            };
        });
    }

    // ---- schedule ---------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("schedule", "closing parameter bundle at (x, q)");
        auto x = std::make_shared<std::string>();
        auto q = std::make_shared<uint64_t>(3);
        auto L = std::make_shared<double>(1.0);
        auto M = std::make_shared<double>(4.0);
        auto yov = std::make_shared<std::string>();
        cmd->add_option("--x", *x)->required();
        cmd->add_option("--q", *q)->required();
        cmd->add_option("--L", *L, "constant in the T exponent");
        cmd->add_option("--mprime", *M, "constant M'");
        cmd->add_option("--y-override", *yov, "y when the prescribed value is infeasible");
        cmd->callback([&, x, q, L, M, yov] {
            run = [&, x, q, L, M, yov] {
                std::optional<double> ov;
                if (!yov->empty()) ov = parse_real(*yov);
                auto s = parameter_schedule(parse_real(*x), *q, *L, *M, ov, go.sieve_cap);
                table.columns({"x", "q", "L_const", "M_prime", "delta", "T", "log_V_T", "V_T",
                               "log_y_paper", "paper_y_feasible", "y", "D", "ell", "c"});
                table.row({Cell::of(s.x), Cell::of(s.q), Cell::of(s.L_const),
                           Cell::of(s.M_prime), Cell::of(s.delta), Cell::of(s.T),
                           Cell::of(s.log_V_T), Cell::of(s.V_T), Cell::of(s.log_y_paper),
                           Cell::of(s.paper_y_feasible), Cell::of(s.y), Cell::of(s.D),
                           Cell::of(s.ell), Cell::of(s.c)});
            };
        });
    }

    // ---- probe -------------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("probe", "main term + exceptional-character error probe");
        auto x = std::make_shared<std::string>();
        auto q = std::make_shared<uint64_t>(3);
        auto a = std::make_shared<uint64_t>(1);
        auto yov = std::make_shared<std::string>();
        auto pc = std::make_shared<ProbeConstants>();
        cmd->add_option("--x", *x)->required();
        cmd->add_option("--q", *q)->required();
        cmd->add_option("--a", *a)->required();
        cmd->add_option("--y-override", *yov, "default 16 q^2");
        add_constant_flags(cmd, pc);
        cmd->callback([&, x, q, a, yov, pc] {
            run = [&, x, q, a, yov, pc] {
                std::optional<double> ov;
                if (!yov->empty()) ov = parse_real(*yov);
                auto rep = theorem_probe(parse_real(*x), *q, *a, ov, *pc, go.sieve());
                probe_columns(table);
                probe_row(table, rep);
            };
        });
    }

    // ---- sweep --------------------------------------------------------------------
    {
        auto* cmd = app.add_subcommand("sweep", "run an operation over a parameter grid");
        auto op = std::make_shared<std::string>();
        auto qs = std::make_shared<std::string>();
        auto xs = std::make_shared<std::string>();
        auto yov = std::make_shared<std::string>();
        auto pc = std::make_shared<ProbeConstants>();
        cmd->add_option("op", *op, "operation to sweep (probe)")->required();
        cmd->add_option("--q", *qs, "moduli, comma separated")->required();
        cmd->add_option("--x", *xs, "x list or lo:hi:xfactor range")->required();
        cmd->add_option("--y-override", *yov);
        add_constant_flags(cmd, pc);
        cmd->callback([&, op, qs, xs, yov, pc] {
            run = [&, op, qs, xs, yov, pc] {
                if (*op != "probe")
                    throw config_error("sweep supports the probe operation");
                std::optional<double> ov;
                if (!yov->empty()) ov = parse_real(*yov);
                probe_columns(table);
                // rows ordered by (q list order, a ascending, x ascending)
                for (double qv : parse_number_list(*qs)) {
                    auto q = static_cast<uint64_t>(qv);
                    std::vector<std::vector<TheoremProbeReport>> by_x;
                    for (double x : parse_number_list(*xs))
                        by_x.push_back(theorem_probe_all(x, q, ov, *pc, go.sieve()));
                    if (by_x.empty()) continue;
                    for (size_t ai = 0; ai < by_x.front().size(); ++ai)
                        for (const auto& reps : by_x) probe_row(table, reps[ai]);
                }
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        table.meta("version", Cell::of(siftlab::version));
        table.meta("format", Cell::of(go.format));
        table.meta("threads", Cell::of(static_cast<long long>(go.threads)));
        run();
        std::ostream* os = &std::cout;
        std::ofstream file;
        if (!go.out_path.empty()) {
            file.open(go.out_path, std::ios::binary);
            if (!file) throw config_error("cannot open output path: " + go.out_path);
            os = &file;
        }
        if (go.format == "json") table.write_json(*os);
        else table.write_csv(*os);
        os->flush();
    } catch (const config_error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 1;
    } catch (const precision_error& e) {
        std::cerr << "precision error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
