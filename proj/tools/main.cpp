// modsurf: exact arithmetic for quadratic irrationals, binary quadratic
// forms, closed geodesics on the modular surface, and thin-semigroup
// experiments.  One subcommand per experiment; output is deterministic for
// fixed arguments.
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "modsurf/config.hpp"
#include "modsurf/geodesics.hpp"
#include "modsurf/orbits.hpp"
#include "modsurf/pell.hpp"
#include "modsurf/textio.hpp"

using nlohmann::json;
using namespace modsurf;

namespace {

constexpr const char* kVersion = "modsurf 1.0.0";

struct Budget {
    std::optional<std::chrono::steady_clock::time_point> deadline;
    std::optional<uint64_t> row_limit;
    uint64_t rows = 0;
    bool truncated = false;

    bool row() {
        ++rows;
        if (row_limit && rows > *row_limit) {
            truncated = true;
            return false;
        }
        if (deadline && std::chrono::steady_clock::now() > *deadline) {
            truncated = true;
            return false;
        }
        return true;
    }
    void finish() const {
        if (truncated) std::cerr << "truncated: limit or time budget reached\n";
    }
};

json mpz_to_json(const mpz_class& v) {
    if (v.fits_slong_p()) return json(v.get_si());
    return json(v.get_str());
}

json form_to_json(const Form& f) {
    return json::array({mpz_to_json(f.A), mpz_to_json(f.B), mpz_to_json(f.C)});
}

std::string form_to_text(const Form& f) {
    std::ostringstream os;
    os << '[' << f.A << ',' << f.B << ',' << f.C << ']';
    return os.str();
}

Form parse_form(const std::string& text) {
    std::string t = text;
    for (char& c : t)
        if (c == '[' || c == ']') c = ' ';
    std::istringstream is(t);
    std::string a, b, cc;
    if (!std::getline(is, a, ',') || !std::getline(is, b, ',') || !std::getline(is, cc))
        throw Error("parse_error", "expected A,B,C");
    return Form(mpz_class(a), mpz_class(b), mpz_class(cc));
}

mpz_class parse_int(const std::string& s) {
    try {
        return mpz_class(s);
    } catch (const std::invalid_argument&) {
        throw Error("parse_error", "not an integer: " + s);
    }
}

void print_cf(std::ostream& os, const CFExpansion& e) { os << format_cf(e); }

int run(int argc, char** argv) {
    CLI::App app{"exact arithmetic for quadratic irrationals, forms, closed "
                 "geodesics and thin semigroup orbits"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string config_path;
    unsigned workers_flag = 0;
    unsigned q_bound_flag = 0;
    double time_budget = 0;
    uint64_t limit = 0;
    app.add_option("--config", config_path, "flat key=value config file");
    app.add_option("--workers", workers_flag, "worker threads (0 = auto)");
    app.add_option("--q-bound", q_bound_flag, "admissibility modulus bound");
    app.add_option("--time-budget", time_budget, "soft time budget in seconds");
    app.add_option("--limit", limit, "cap on emitted rows for streaming output");

    // surd
    auto* c_surd = app.add_subcommand("surd", "parse a quadratic surd and expand it");
    std::string surd_text, cf_text;
    c_surd->add_option("value", surd_text, "surd as (P+C*sqrt(D))/R");
    c_surd->add_option("--cf", cf_text, "evaluate a continued fraction instead");

    // classgroup
    auto* c_cg = app.add_subcommand("classgroup", "narrow class group of a discriminant");
    std::string cg_d;
    std::string cg_format = "json";
    c_cg->add_option("D", cg_d, "discriminant (0 or 1 mod 4, non-square)")->required();
    c_cg->add_option("--format", cg_format, "json or text")
        ->check(CLI::IsMember({"json", "text"}));

    // pell
    auto* c_pell = app.add_subcommand("pell", "minimal solutions of T^2 - D S^2 = +-4");
    std::string pell_d;
    bool pell_json = false;
    c_pell->add_option("D", pell_d, "positive discriminant")->required();
    c_pell->add_flag("--json", pell_json, "emit JSON");

    // geodesic
    auto* c_geo = app.add_subcommand("geodesic", "form <-> closed geodesic correspondence");
    std::string geo_form, geo_matrix;
    c_geo->add_option("--form", geo_form, "form as A,B,C");
    c_geo->add_option("--matrix", geo_matrix, "matrix as a,b,c,d");

    // cutseq
    auto* c_cut = app.add_subcommand("cutseq", "cutting sequence of a closed geodesic");
    std::string cut_matrix;
    uint64_t cut_n = 20;
    c_cut->add_option("--matrix", cut_matrix, "matrix as a,b,c,d")->required();
    c_cut->add_option("-n,--letters", cut_n, "number of letters");

    // duke
    auto* c_duke = app.add_subcommand("duke", "geodesic sampling and the area statistic");
    std::string duke_d, duke_rect;
    bool duke_samples = false;
    c_duke->add_option("D", duke_d, "indefinite discriminant")->required();
    c_duke->add_option("--rect", duke_rect, "region as x1,x2,y1,y2");
    c_duke->add_flag("--samples", duke_samples, "emit CSV class_index,x,y");
    double duke_step = 0;
    c_duke->add_option("--step", duke_step, "arclength spacing (default from config)");

    // growth
    auto* c_growth = app.add_subcommand("growth", "semigroup ball counts and growth fit");
    unsigned growth_a = 2;
    std::vector<uint64_t> growth_grid;
    c_growth->add_option("A", growth_a, "alphabet bound")->required();
    c_growth->add_option("--grid", growth_grid, "radii (default geometric to 1e5)")
        ->delimiter(',');

    // mult
    auto* c_mult = app.add_subcommand("mult", "multiplicity of a linear functional");
    unsigned mult_a = 2;
    uint64_t mult_x = 0;
    int64_t mult_n = 0;
    std::vector<int64_t> mult_f = {1, 0, 0, 0};
    bool mult_wit = false;
    c_mult->add_option("A", mult_a, "alphabet bound")->required();
    c_mult->add_option("X", mult_x, "ball radius")->required();
    c_mult->add_option("n", mult_n, "target value")->required();
    c_mult->add_option("--functional", mult_f, "coefficients alpha,beta,gamma,delta")
        ->delimiter(',')
        ->expected(4);
    c_mult->add_flag("--witnesses", mult_wit, "list witness words");

    // zaremba
    auto* c_zar = app.add_subcommand("zaremba", "bounded partial quotient expansions");
    uint64_t zar_d = 0, zar_scan = 0;
    unsigned zar_a = 5;
    c_zar->add_option("-d,--denominator", zar_d, "single denominator check");
    c_zar->add_option("--scan", zar_scan, "scan all denominators up to N");
    c_zar->add_option("-A,--alphabet", zar_a, "partial quotient bound");

    // cohen
    auto* c_cohen = app.add_subcommand("cohen", "multiplicity ratios for the top-left entry");
    unsigned cohen_a = 2;
    uint64_t cohen_from = 2, cohen_to = 100;
    double cohen_delta = 0;
    c_cohen->add_option("A", cohen_a, "alphabet bound")->required();
    c_cohen->add_option("--from", cohen_from, "first n");
    c_cohen->add_option("--to", cohen_to, "last n");
    c_cohen->add_option("--delta", cohen_delta, "override the fitted dimension");

    // mcmullen
    auto* c_mc = app.add_subcommand("mcmullen", "low-lying periodic words in a fixed field");
    unsigned mc_a = 2, mc_max = 20;
    std::string mc_kernel = "5";
    c_mc->add_option("-A,--alphabet", mc_a, "partial quotient bound");
    c_mc->add_option("--kernel", mc_kernel, "squarefree field kernel");
    c_mc->add_option("--max-period", mc_max, "even bound on the period length");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // exit 2 on usage errors, 0 for --help/--version
    }

    Config cfg = config_load(config_path);
    if (workers_flag) cfg.workers = workers_flag;  // flags win over the file
    if (q_bound_flag) cfg.q_bound = q_bound_flag;
    if (!cfg.workers) {
        if (const char* env = std::getenv("MODSURF_WORKERS")) cfg.workers = std::atoi(env);
    }
    Budget budget;
    if (limit) budget.row_limit = limit;
    if (time_budget > 0)
        budget.deadline = std::chrono::steady_clock::now() +
                          std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                              std::chrono::duration<double>(time_budget));

    if (*c_surd) {
        if (!cf_text.empty()) {
            CFExpansion e = parse_cf(cf_text);
            QuadSurd x = cf_eval(e);
            std::cout << "value=" << format_surd(x) << "\n";
            return 0;
        }
        if (surd_text.empty()) throw Error("parse_error", "provide a surd or --cf");
        QuadSurd x = parse_surd(surd_text);
        CFExpansion e = cf_expand(x);
        std::cout << "surd=" << format_surd(x) << "\n";
        std::cout << "conjugate=" << format_surd(x.galois_conjugate()) << "\n";
        std::cout << "floor=" << x.floor() << "\n";
        std::cout << "reduced=" << (x.is_reduced() ? 1 : 0) << "\n";
        std::cout << "cf=";
        print_cf(std::cout, e);
        std::cout << "\n";
        return 0;
    }

    if (*c_cg) {
        ClassGroupListing cg = class_group(parse_int(cg_d));
        if (cg_format == "json") {
            json out{{"D", mpz_to_json(cg.D)}, {"h", cg.h()}, {"classes", json::array()}};
            for (const FormClass& c : cg.classes) {
                json cls{{"rep", form_to_json(c.rep)}, {"cycle", json::array()}};
                for (const Form& f : c.cycle) cls["cycle"].push_back(form_to_json(f));
                if (!c.period.empty()) {
                    json per = json::array();
                    for (const mpz_class& d : c.period) per.push_back(mpz_to_json(d));
                    cls["period"] = per;
                }
                out["classes"].push_back(cls);
            }
            std::cout << out.dump() << "\n";
        } else {
            std::cout << "D=" << cg.D << " h=" << cg.h() << "\n";
            for (const FormClass& c : cg.classes) {
                std::cout << form_to_text(c.rep);
                if (!c.period.empty()) {
                    std::cout << " period=";
                    for (std::size_t i = 0; i < c.period.size(); ++i)
                        std::cout << (i ? "," : "") << c.period[i];
                }
                std::cout << " cycle:";
                for (const Form& f : c.cycle) std::cout << ' ' << form_to_text(f);
                std::cout << "\n";
            }
        }
        return 0;
    }

    if (*c_pell) {
        mpz_class D = parse_int(pell_d);
        PellSolution p = solve_pell4(D);
        auto n = solve_pell_neg4(D);
        if (pell_json) {
            json out{{"D", mpz_to_json(D)},
                     {"t", mpz_to_json(p.t)},
                     {"s", mpz_to_json(p.s)},
                     {"sign", p.sign},
                     {"epsilon", format_surd(p.epsilon)}};
            if (n) {
                out["eta"] = {{"t", mpz_to_json(n->t)},
                              {"s", mpz_to_json(n->s)},
                              {"sign", n->sign},
                              {"value", format_surd(n->epsilon)}};
            }
            std::cout << out.dump() << "\n";
        } else {
            std::cout << "t=" << p.t << " s=" << p.s << " sign=+4 epsilon="
                      << format_surd(p.epsilon) << "\n";
            if (n)
                std::cout << "eta: t=" << n->t << " s=" << n->s
                          << " sign=-4 value=" << format_surd(n->epsilon) << "\n";
        }
        return 0;
    }

    if (*c_geo) {
        if (geo_form.empty() == geo_matrix.empty())
            throw Error("parse_error", "provide exactly one of --form or --matrix");
        if (!geo_form.empty()) {
            Form f = parse_form("[" + geo_form + "]");
            HyperbolicMatrix mp = form_to_matrix_pell(f);
            HyperbolicMatrix mc = form_to_matrix_cf(f);
            std::cout << "matrix=" << format_matrix(mp.m()) << "\n";
            std::cout << "matrix_cf=" << format_matrix(mc.m()) << "\n";
            std::cout << "lambda=" << format_surd(expanding_eigenvalue(mp)) << "\n";
            std::cout << "length=" << geodesic_length(mp) << "\n";
            std::cout << "visual=" << format_surd(visual_point(mp)) << "\n";
        } else {
            HyperbolicMatrix M{parse_matrix(geo_matrix)};
            auto [red, gamma] = reduce_matrix(M);
            std::cout << "form=" << form_to_text(matrix_to_form(M)) << "\n";
            std::cout << "discriminant=" << discriminant(matrix_to_form(M)) << "\n";
            std::cout << "lambda=" << format_surd(expanding_eigenvalue(M)) << "\n";
            std::cout << "length=" << geodesic_length(M) << "\n";
            std::cout << "visual=" << format_surd(visual_point(M)) << "\n";
            std::cout << "reduced=" << format_matrix(red.m()) << "\n";
            std::cout << "gamma=" << format_matrix(gamma) << "\n";
        }
        return 0;
    }

    if (*c_cut) {
        HyperbolicMatrix M{parse_matrix(cut_matrix)};
        CuttingSequence cs = cutting_sequence(M, cut_n, cfg.cut_tol);
        std::cout << letters_to_string(cs.letters) << "\n";
        std::cout << "runs=";
        for (std::size_t i = 0; i < cs.runs.size(); ++i)
            std::cout << (i ? "," : "") << cs.runs[i];
        std::cout << "\n";
        return 0;
    }

    if (*c_duke) {
        mpz_class D = parse_int(duke_d);
        double step = duke_step > 0 ? duke_step : cfg.step;
        ClassSampling s = sample_class(D, step, cfg.workers);
        if (duke_samples) {
            std::printf("class_index,x,y\n");
            for (std::size_t i = 0; i < s.samples.size(); ++i)
                for (auto& [x, y] : s.samples[i].points) {
                    if (!budget.row()) {
                        budget.finish();
                        return 0;
                    }
                    std::printf("%zu,%.12g,%.12g\n", i, x, y);
                }
            return 0;
        }
        if (duke_rect.empty()) throw Error("parse_error", "provide --rect or --samples");
        Rect r{};
        if (std::sscanf(duke_rect.c_str(), "%lf,%lf,%lf,%lf", &r.x1, &r.x2, &r.y1, &r.y2) != 4)
            throw Error("parse_error", "rect must be x1,x2,y1,y2");
        double stat = duke_statistic(s, r);
        double area = normalized_hyperbolic_area(r);
        std::printf("statistic=%.12g\n", stat);
        std::printf("normalized_area=%.12g\n", area);
        std::printf("ratio=%.12g\n", area > 0 ? stat / area : 0.0);
        return 0;
    }

    if (*c_growth) {
        if (growth_grid.empty())
            growth_grid = {100, 316, 1000, 3162, 10000, 31623, 100000};
        GrowthFit fit = growth_exponent(growth_a, growth_grid, cfg.workers);
        std::printf("X,count\n");
        for (std::size_t i = 0; i < fit.grid.size(); ++i)
            std::printf("%llu,%llu\n", (unsigned long long)fit.grid[i],
                        (unsigned long long)fit.counts[i]);
        // Display-only context: the large-A asymptotic delta ~ 1 - 6/(pi^2 A).
        std::fprintf(stderr, "fit: slope=%.6f (2*delta), hensley asymptotic 2*delta=%.6f\n",
                     fit.slope, 2.0 * (1.0 - 6.0 / (9.869604401089358 * growth_a)));
        return 0;
    }

    if (*c_mult) {
        LinearFunctional F{mult_f[0], mult_f[1], mult_f[2], mult_f[3]};
        MultiplicityReport rep = multiplicity({mult_a, mult_x}, F, mult_n, mult_wit, cfg.q_bound);
        json out{{"n", rep.n},
                 {"count", rep.count},
                 {"X", rep.X},
                 {"admissible", rep.admissible}};
        if (mult_wit) {
            json w = json::array();
            for (const Word& word : rep.witnesses) w.push_back(word);
            out["witnesses"] = w;
        }
        std::cout << out.dump() << "\n";
        return 0;
    }

    if (*c_zar) {
        if ((zar_d == 0) == (zar_scan == 0))
            throw Error("parse_error", "provide exactly one of -d or --scan");
        if (zar_d) {
            auto hit = zaremba_check(zar_d, zar_a);
            if (hit) {
                std::cout << "d=" << zar_d << " b=" << hit->first << " digits=";
                for (std::size_t i = 0; i < hit->second.size(); ++i)
                    std::cout << (i ? "," : "") << hit->second[i];
                std::cout << "\n";
            } else {
                std::cout << "d=" << zar_d << " none\n";
            }
            return 0;
        }
        ZarembaScan scan = zaremba_scan(zar_scan, zar_a, true);
        std::printf("d,b,digits\n");
        for (uint64_t d = 1; d <= zar_scan; ++d) {
            if (!budget.row()) break;
            const auto& [b, digits] = scan.witnesses[d];
            if (d > 1 && digits.empty()) {
                std::printf("%llu,,\n", (unsigned long long)d);
                continue;
            }
            std::printf("%llu,%llu,", (unsigned long long)d, (unsigned long long)b);
            for (std::size_t i = 0; i < digits.size(); ++i)
                std::printf("%s%u", i ? " " : "", digits[i]);
            std::printf("\n");
        }
        budget.finish();
        std::fprintf(stderr, "exceptions=%zu density=%.6f\n", scan.exceptions.size(),
                     scan.density);
        return 0;
    }

    if (*c_cohen) {
        std::optional<double> delta;
        if (cohen_delta > 0) delta = cohen_delta;
        auto rows = cohen_ratio(cohen_a, cohen_from, cohen_to, delta, cfg.workers);
        std::printf("n,mult,predicted,ratio\n");
        for (const CohenRow& r : rows) {
            if (!budget.row()) break;
            std::printf("%llu,%llu,%.12g,%.12g\n", (unsigned long long)r.n,
                        (unsigned long long)r.mult, r.predicted, r.ratio);
        }
        budget.finish();
        return 0;
    }

    if (*c_mc) {
        auto hits = mcmullen_search(mc_a, parse_int(mc_kernel), mc_max);
        for (const McMullenHit& h : hits) {
            if (!budget.row()) break;
            CFExpansion e;
            e.period.assign(h.word.begin(), h.word.end());
            std::cout << format_cf(e) << " " << format_surd(h.value) << "\n";
        }
        budget.finish();
        return 0;
    }

    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const Error& e) {
        std::cerr << "error:" << e.code() << ":" << e.what() << "\n";
        return e.code() == "parse_error" ? 2 : 1;  // malformed input is a usage error
    } catch (const std::exception& e) {
        std::cerr << "error:internal:" << e.what() << "\n";
        return 1;
    }
}
