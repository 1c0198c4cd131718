#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "freelevy/freelevy.h"
#include "svg_writer.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

enum Exit { ExitOk = 0, ExitUsage = 1, ExitWindow = 2, ExitClass = 3, ExitConvergence = 4, ExitReproduce = 5 };

constexpr double min_reltol = 1e-14;
constexpr double max_reltol = 1e-2;

// Raised for any failure; carries the process exit code.
struct CliError {
    int code;
    std::string message;
};

int exit_code(fl_status s) {
    switch (s) {
        case FL_OK: return ExitOk;
        case FL_ERR_WINDOW_UNRESOLVED: return ExitWindow;
        case FL_ERR_UNCLASSIFIABLE:
        case FL_ERR_POINT_MASS: return ExitClass;
        case FL_ERR_NONCONVERGENT:
        case FL_ERR_INSUFFICIENT_RESOLUTION:
        case FL_ERR_INTERNAL: return ExitConvergence;
        case FL_ERR_REPRODUCTION_FAILED: return ExitReproduce;
        default: return ExitUsage;
    }
}

void check(fl_status s) {
    if (s == FL_OK) return;
    std::string msg = fl_last_error();
    if (s == FL_ERR_WINDOW_UNRESOLVED && msg.find("--window") == std::string::npos) msg += "; pass an explicit --window LO:HI";
    if (s == FL_ERR_INSUFFICIENT_RESOLUTION && msg.find("--points") == std::string::npos) msg += "; increase --points";
    throw CliError{exit_code(s), msg};
}

std::string take(char* p) {
    std::string s = p ? p : "";
    fl_string_free(p);
    return s;
}

struct ModelDeleter {
    void operator()(fl_model* m) const { fl_model_free(m); }
};
struct CurveDeleter {
    void operator()(fl_curve* c) const { fl_curve_free(c); }
};
using ModelPtr = std::unique_ptr<fl_model, ModelDeleter>;
using CurvePtr = std::unique_ptr<fl_curve, CurveDeleter>;

struct Config {
    std::string catalog_id;
    std::string spec_path;
    std::vector<std::string> params;
    double time = 0.0;
    std::string times;
    std::string times_geom;
    std::string window = "auto";
    int points = 512;
    double reltol = 0.0;
    std::string out;
    std::string format = "csv";
    bool verbose = false;
    double radius = 1.0;
    std::string case_id;
};

double parse_number(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw CliError{ExitUsage, what + ": '" + s + "' is not a number"};
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) parts.push_back(cur);
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
}

ModelPtr load_model(const Config& c) {
    fl_model* m = nullptr;
    if (!c.spec_path.empty()) {
        if (!c.params.empty()) throw CliError{ExitUsage, "--param applies to --catalog models only"};
        check(fl_model_from_spec_file(c.spec_path.c_str(), &m));
    } else if (!c.catalog_id.empty()) {
        json params = json::object();
        for (const auto& kv : c.params) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos || eq == 0) throw CliError{ExitUsage, "--param expects k=v, got '" + kv + "'"};
            params[kv.substr(0, eq)] = parse_number(kv.substr(eq + 1), "--param " + kv.substr(0, eq));
        }
        check(fl_model_from_catalog(c.catalog_id.c_str(), params.dump().c_str(), &m));
    } else {
        throw CliError{ExitUsage, "one of --catalog or --spec is required"};
    }
    return ModelPtr(m);
}

std::vector<double> parse_times(const Config& c) {
    std::vector<double> ts;
    const int given = (c.time != 0.0) + !c.times.empty() + !c.times_geom.empty();
    if (given > 1) throw CliError{ExitUsage, "use only one of --time, --times and --times-geom"};
    if (c.time != 0.0) ts.push_back(c.time);
    if (!c.times.empty())
        for (const auto& p : split(c.times, ',')) ts.push_back(parse_number(p, "--times"));
    if (!c.times_geom.empty()) {
        const auto p = split(c.times_geom, ':');
        if (p.size() != 3) throw CliError{ExitUsage, "--times-geom expects A:B:N"};
        const double a = parse_number(p[0], "--times-geom"), b = parse_number(p[1], "--times-geom");
        const double nn = parse_number(p[2], "--times-geom");
        if (!(a > 0.0 && b > 0.0) || nn < 1 || nn != std::floor(nn))
            throw CliError{ExitUsage, "--times-geom needs A, B > 0 and an integer N >= 1"};
        const int n = static_cast<int>(nn);
        for (int k = 0; k < n; ++k) ts.push_back(n == 1 ? a : a * std::pow(b / a, static_cast<double>(k) / (n - 1)));
    }
    if (ts.empty()) ts.push_back(1.0);
    for (double s : ts)
        if (!(s > 0.0) || !std::isfinite(s)) throw CliError{ExitUsage, "times must be positive"};
    return ts;
}

struct WindowSpec {
    int automatic = 1;
    double lo = 0.0, hi = 0.0;
};

WindowSpec parse_window(const std::string& w) {
    if (w == "auto") return {};
    const auto colon = w.find(':', 1);
    if (colon == std::string::npos) throw CliError{ExitUsage, "--window expects LO:HI or auto"};
    WindowSpec r{0, parse_number(w.substr(0, colon), "--window"), parse_number(w.substr(colon + 1), "--window")};
    if (!(r.lo < r.hi)) throw CliError{ExitUsage, "--window needs LO < HI"};
    return r;
}

fl_options options(const Config& c) {
    fl_options o{};
    double rt = c.reltol;
    if (rt == 0.0)
        if (const char* env = std::getenv("FREELEVY_RELTOL")) rt = parse_number(env, "FREELEVY_RELTOL");
    if (rt != 0.0 && !(rt >= min_reltol && rt <= max_reltol))
        throw CliError{ExitUsage, "reltol must lie in [1e-14, 1e-2]"};
    o.reltol = rt;
    return o;
}

void check_points(const Config& c) {
    if (c.points < 16) throw CliError{ExitUsage, "--points must be at least 16"};
}

// Writes through a temporary file in the same directory and renames it into place.
void write_atomic(const std::string& path, const std::string& content) {
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw CliError{ExitUsage, "cannot write '" + tmp.string() + "'"};
        f << content;
        if (!f.flush()) throw CliError{ExitUsage, "cannot write '" + tmp.string() + "'"};
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw CliError{ExitUsage, "cannot rename into '" + path + "': " + ec.message()};
    }
}

void emit(const Config& c, const std::string& content) {
    if (c.out.empty()) std::cout << content;
    else write_atomic(c.out, content);
}

std::string time_label(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", s);
    return buf;
}

// out.csv with several times becomes out_s0.5.csv, out_s1.csv, ...
std::string per_time_path(const std::string& out, double s) {
    const fs::path p(out);
    fs::path r = p.parent_path() / (p.stem().string() + "_s" + time_label(s) + p.extension().string());
    return r.string();
}

void report_stats(const Config& c) {
    if (!c.verbose) return;
    const fl_stats st = fl_get_stats();
    std::cerr << "quadrature: " << st.integrals << " integrals, " << st.panels << " panels, worst relative error "
              << st.worst_error << '\n';
}

int cmd_density(const Config& c) {
    check_points(c);
    const ModelPtr m = load_model(c);
    const auto ts = parse_times(c);
    const WindowSpec w = parse_window(c.window);
    const fl_options o = options(c);

    std::vector<freelevy_cli::SvgSeries> series;
    std::vector<freelevy_cli::SvgAtom> atoms;
    json js = json::array();
    std::string combined;
    for (double s : ts) {
        fl_curve* raw = nullptr;
        check(fl_curve_compute(m.get(), s, w.automatic, w.lo, w.hi, c.points, &o, &raw));
        const CurvePtr curve(raw);
        int present = 0;
        double loc = 0.0, mass = 0.0;
        check(fl_atom(m.get(), s, &o, &present, &loc, &mass));
        double cm = 0.0;
        check(fl_curve_mass(curve.get(), &cm));
        if (c.verbose)
            std::cerr << "s=" << time_label(s) << ": " << fl_curve_size(curve.get()) << " samples, continuous mass "
                      << cm << (present ? ", atom mass " + std::to_string(mass) : std::string()) << '\n';

        if (c.format == "csv") {
            char* csv = nullptr;
            check(fl_curve_csv(curve.get(), &csv));
            const std::string text = take(csv);
            if (ts.size() == 1) combined = text;
            else if (!c.out.empty()) write_atomic(per_time_path(c.out, s), text);
            else combined += "# s=" + time_label(s) + "\n" + text;
        } else if (c.format == "json") {
            json samples = json::array();
            for (std::size_t i = 0; i < fl_curve_size(curve.get()); ++i) {
                fl_sample smp;
                check(fl_curve_sample(curve.get(), i, &smp));
                samples.push_back({smp.x, smp.v, smp.psi, smp.f});
            }
            json atom = present ? json{{"present", true}, {"location", loc}, {"mass", mass}} : json{{"present", false}};
            js.push_back({{"s", s}, {"columns", {"x", "v", "psi", "f"}}, {"samples", samples}, {"atom", atom},
                          {"continuous_mass", cm}});
        } else {
            freelevy_cli::SvgSeries sr{"s=" + time_label(s), {}, {}};
            for (std::size_t i = 0; i < fl_curve_size(curve.get()); ++i) {
                fl_sample smp;
                check(fl_curve_sample(curve.get(), i, &smp));
                sr.x.push_back(smp.psi);
                sr.y.push_back(smp.f);
            }
            series.push_back(std::move(sr));
            if (present) atoms.push_back({"s=" + time_label(s), loc, mass});
        }
    }
    if (c.format == "csv") {
        if (ts.size() == 1 || c.out.empty()) emit(c, combined);
    } else if (c.format == "json") {
        emit(c, js.dump(2) + "\n");
    } else {
        char* name = nullptr;
        check(fl_model_name(m.get(), &name));
        emit(c, freelevy_cli::render_svg(series, atoms, take(name)));
    }
    report_stats(c);
    return ExitOk;
}

int cmd_report(const Config& c) {
    check_points(c);
    if (c.format != "json" && c.format != "csv") throw CliError{ExitUsage, "report supports --format json only"};
    const ModelPtr m = load_model(c);
    const auto ts = parse_times(c);
    const WindowSpec w = parse_window(c.window);
    const fl_options o = options(c);
    json out = json::array();
    for (double s : ts) {
        char* text = nullptr;
        check(fl_report_json(m.get(), s, w.automatic, w.lo, w.hi, c.points, &o, &text));
        out.push_back(json::parse(take(text)));
    }
    emit(c, (ts.size() == 1 ? out.front() : out).dump(2) + "\n");
    report_stats(c);
    return ExitOk;
}

int cmd_reproduce(const Config& c) {
    const fl_options o = options(c);
    char* table = nullptr;
    const fl_status st = fl_reproduce(c.case_id.c_str(), &o, &table);
    if (table) emit(c, take(table));
    report_stats(c);
    if (st == FL_ERR_REPRODUCTION_FAILED) {
        std::cerr << "reproduce: " << fl_last_error() << '\n';
        return ExitReproduce;
    }
    check(st);
    return ExitOk;
}

int cmd_catalog_list(const Config& c) {
    char* text = nullptr;
    check(fl_catalog_json(&text));
    const json cat = json::parse(take(text));
    if (c.format == "json") {
        emit(c, cat.dump(2) + "\n");
        return ExitOk;
    }
    std::ostringstream os;
    for (const auto& e : cat) {
        os << e["id"].get<std::string>() << '\n';
        os << "  parameters: " << e["parameters"].get<std::string>() << '\n';
        os << "  validity:   " << e["validity"].get<std::string>() << '\n';
        os << "  source:     " << e["provenance"].get<std::string>() << '\n';
    }
    emit(c, os.str());
    return ExitOk;
}

int cmd_validate(const Config& c) {
    const ModelPtr m = load_model(c);
    const fl_options o = options(c);
    char* text = nullptr;
    check(fl_validate_json(m.get(), &o, &text));
    const std::string report = take(text);
    emit(c, report + "\n");
    const json j = json::parse(report);
    bool ok = true;
    for (const auto& ch : j.value("checks", json::array())) ok = ok && ch.value("passed", true);
    if (!ok) throw CliError{ExitUsage, "validation failed"};
    return ExitOk;
}

int cmd_theta_scan(const Config& c) {
    const ModelPtr m = load_model(c);
    const fl_options o = options(c);
    char* text = nullptr;
    if (c.format == "json") check(fl_theta_scan_json(m.get(), c.radius, c.points, &o, &text));
    else if (c.format == "csv") check(fl_theta_scan_csv(m.get(), c.radius, c.points, &o, &text));
    else throw CliError{ExitUsage, "theta-scan supports --format csv|json"};
    emit(c, take(text));
    report_stats(c);
    return ExitOk;
}

void add_measure_flags(CLI::App* sub, Config& c) {
    sub->add_option("--catalog", c.catalog_id, "catalog model id");
    sub->add_option("--spec", c.spec_path, "JSON measure spec file");
    sub->add_option("--param", c.params, "model parameter k=v (repeatable)");
}

void add_common_flags(CLI::App* sub, Config& c) {
    sub->add_option("--reltol", c.reltol, "relative quadrature tolerance (env FREELEVY_RELTOL)");
    sub->add_option("--out", c.out, "output path (stdout when omitted)");
    sub->add_flag("--verbose", c.verbose, "print quadrature diagnostics to stderr");
}

void add_time_flags(CLI::App* sub, Config& c) {
    sub->add_option("--time", c.time, "single time s");
    sub->add_option("--times", c.times, "comma separated times");
    sub->add_option("--times-geom", c.times_geom, "geometric range A:B:N");
    sub->add_option("--window", c.window, "x-window LO:HI or auto");
    sub->add_option("--points", c.points, "samples per curve (>= 16)");
}

}  // namespace

int main(int argc, char** argv) {
    Config c;
    CLI::App app{"Densities, atoms and mode analysis of free Levy process marginals"};
    app.require_subcommand(1);

    auto* density = app.add_subcommand("density", "density curves as CSV, JSON or SVG");
    add_measure_flags(density, c);
    add_time_flags(density, c);
    add_common_flags(density, c);
    density->add_option("--format", c.format, "csv|json|svg")->check(CLI::IsMember({"csv", "json", "svg"}));

    auto* report = app.add_subcommand("report", "classification, atom, components, modes and threshold per time");
    add_measure_flags(report, c);
    add_time_flags(report, c);
    add_common_flags(report, c);
    report->add_option("--format", c.format, "json")->check(CLI::IsMember({"json"}));

    auto* repro = app.add_subcommand("reproduce", "run a reproduction case, or all of them");
    repro->add_option("case", c.case_id, "case id or 'all'")->required();
    add_common_flags(repro, c);

    auto* cat = app.add_subcommand("catalog", "catalog operations");
    cat->require_subcommand(1);
    auto* list = cat->add_subcommand("list", "list catalog ids, parameters and sources");
    list->add_option("--format", c.format, "text|json")->check(CLI::IsMember({"text", "json", "csv"}));
    list->add_option("--out", c.out, "output path");

    auto* val = app.add_subcommand("validate", "check a triplet for admissibility");
    add_measure_flags(val, c);
    add_common_flags(val, c);

    auto* scan = app.add_subcommand("theta-scan", "A_nu along the circle R sin(theta) e^(i theta)");
    add_measure_flags(scan, c);
    add_common_flags(scan, c);
    scan->add_option("--radius", c.radius, "radius R");
    scan->add_option("--points", c.points, "number of angles (>= 9)");
    scan->add_option("--format", c.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ExitOk : ExitUsage;
    }

    try {
        if (*density) return cmd_density(c);
        if (*report) return cmd_report(c);
        if (*repro) return cmd_reproduce(c);
        if (*list) return cmd_catalog_list(c);
        if (*val) return cmd_validate(c);
        if (*scan) {
            if (c.points == 512) c.points = 181;
            return cmd_theta_scan(c);
        }
    } catch (const CliError& e) {
        std::cerr << "freelevy: " << e.message << '\n';
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "freelevy: " << e.what() << '\n';
        return ExitConvergence;
    }
    return ExitUsage;
}
