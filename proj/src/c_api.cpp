#include "freelevy/freelevy.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "freelevy/analysis.hpp"
#include "freelevy/catalog.hpp"
#include "freelevy/curve_integration.hpp"
#include "freelevy/errors.hpp"
#include "freelevy/inversion.hpp"
#include "freelevy/parallel.hpp"
#include "freelevy/quadrature.hpp"
#include "freelevy/reproduce.hpp"
#include "freelevy/serialize.hpp"
#include "freelevy/spec_loader.hpp"

using namespace freelevy;

struct fl_model {
    std::shared_ptr<const MeasureModel> model;
};

struct fl_curve {
    std::shared_ptr<const MeasureModel> model;
    Problem problem;
    DensityCurve curve;
    std::vector<CurveSample> samples;
};

namespace {

thread_local std::string last_error;

fl_status fail(fl_status s, const std::string& msg) {
    last_error = msg;
    return s;
}

// Maps the library exceptions onto status codes and records the message.
template <class F>
fl_status guarded(F&& body) {
    try {
        last_error.clear();
        return body();
    } catch (const WindowUnresolved& e) {
        return fail(FL_ERR_WINDOW_UNRESOLVED, e.what());
    } catch (const Unclassifiable& e) {
        return fail(FL_ERR_UNCLASSIFIABLE, e.what());
    } catch (const NonConvergent& e) {
        return fail(FL_ERR_NONCONVERGENT, e.what());
    } catch (const BracketFailure& e) {
        return fail(FL_ERR_NONCONVERGENT, e.what());
    } catch (const DivergentCompensator& e) {
        return fail(FL_ERR_NONCONVERGENT, e.what());
    } catch (const UnknownFamily& e) {
        return fail(FL_ERR_UNKNOWN_FAMILY, e.what());
    } catch (const SpecError& e) {
        return fail(FL_ERR_SPEC, e.what());
    } catch (const UnknownCase& e) {
        return fail(FL_ERR_UNKNOWN_CASE, e.what());
    } catch (const InsufficientResolution& e) {
        return fail(FL_ERR_INSUFFICIENT_RESOLUTION, e.what());
    } catch (const PointMassError& e) {
        return fail(FL_ERR_POINT_MASS, e.what());
    } catch (const UnsupportedShape& e) {
        return fail(FL_ERR_UNSUPPORTED, e.what());
    } catch (const UnknownReference& e) {
        return fail(FL_ERR_UNSUPPORTED, e.what());
    } catch (const InvalidParams& e) {
        return fail(FL_ERR_INVALID_ARGUMENT, e.what());
    } catch (const nlohmann::json::exception& e) {
        return fail(FL_ERR_SPEC, e.what());
    } catch (const std::exception& e) {
        return fail(FL_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(FL_ERR_INTERNAL, "unknown error");
    }
}

char* dup(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p) throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

EvalContext context(const fl_options* opt) {
    EvalContext ctx;
    if (!opt) return ctx;
    if (opt->reltol > 0.0) ctx.reltol = opt->reltol;
    if (opt->path == 1) ctx.path = EvalPath::Triplet;
    else if (opt->path == 2) ctx.path = EvalPath::Closed;
    else if (opt->path != 0) throw InvalidParams("path must be 0, 1 or 2");
    return ctx;
}

double scale_of(const fl_options* opt) { return opt ? opt->scale : 0.0; }

Window window_of(int auto_window, double lo, double hi) {
    if (auto_window) return Window::autodetect();
    if (!(lo < hi)) throw InvalidParams("window needs lo < hi");
    return Window::fixed(lo, hi);
}

#define FL_REQUIRE(cond, what) \
    if (!(cond)) return fail(FL_ERR_INVALID_ARGUMENT, what)

}  // namespace

extern "C" {

const char* fl_last_error(void) { return last_error.c_str(); }

const char* fl_status_name(fl_status s) {
    switch (s) {
        case FL_OK: return "ok";
        case FL_ERR_INVALID_ARGUMENT: return "invalid argument";
        case FL_ERR_WINDOW_UNRESOLVED: return "window unresolved";
        case FL_ERR_UNCLASSIFIABLE: return "unclassifiable";
        case FL_ERR_NONCONVERGENT: return "nonconvergent";
        case FL_ERR_REPRODUCTION_FAILED: return "reproduction failed";
        case FL_ERR_UNKNOWN_FAMILY: return "unknown family";
        case FL_ERR_SPEC: return "spec error";
        case FL_ERR_UNKNOWN_CASE: return "unknown case";
        case FL_ERR_INSUFFICIENT_RESOLUTION: return "insufficient resolution";
        case FL_ERR_POINT_MASS: return "point mass";
        case FL_ERR_UNSUPPORTED: return "unsupported";
        case FL_ERR_IO: return "io error";
        case FL_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

void fl_string_free(char* s) { std::free(s); }

fl_status fl_model_from_catalog(const char* id, const char* params_json, fl_model** out) {
    FL_REQUIRE(id && out, "null argument");
    return guarded([&] {
        Params params;
        if (params_json && *params_json) {
            const json j = json::parse(params_json);
            if (!j.is_object()) throw SpecError("params must be a JSON object");
            for (const auto& [k, v] : j.items()) {
                if (!v.is_number()) throw SpecError("parameter '" + k + "' must be a number");
                params[k] = v.get<double>();
            }
        }
        *out = new fl_model{std::make_shared<const MeasureModel>(make(id, params))};
        return FL_OK;
    });
}

fl_status fl_model_from_spec(const char* spec_json, fl_model** out) {
    FL_REQUIRE(spec_json && out, "null argument");
    return guarded([&] {
        *out = new fl_model{std::make_shared<const MeasureModel>(load_spec(spec_json))};
        return FL_OK;
    });
}

fl_status fl_model_from_spec_file(const char* path, fl_model** out) {
    FL_REQUIRE(path && out, "null argument");
    return guarded([&] {
        *out = new fl_model{std::make_shared<const MeasureModel>(load_spec_file(path))};
        return FL_OK;
    });
}

void fl_model_free(fl_model* m) { delete m; }

fl_status fl_model_name(const fl_model* m, char** out) {
    FL_REQUIRE(m && out, "null argument");
    return guarded([&] {
        *out = dup(m->model->name);
        return FL_OK;
    });
}

fl_status fl_catalog_json(char** out) {
    FL_REQUIRE(out, "null argument");
    return guarded([&] {
        json arr = json::array();
        for (const auto& e : catalog())
            arr.push_back({{"id", e.id},
                           {"parameters", e.parameters},
                           {"validity", e.validity},
                           {"provenance", e.provenance}});
        *out = dup(arr.dump(2));
        return FL_OK;
    });
}

fl_status fl_phi(const fl_model* m, double x, double y, const fl_options* opt, double* re, double* im) {
    FL_REQUIRE(m && re && im, "null argument");
    return guarded([&] {
        const cplx v = phi(*m->model, UpperHalfPoint(x, y), context(opt));
        *re = v.real();
        *im = v.imag();
        return FL_OK;
    });
}

fl_status fl_b_value(const fl_model* m, double x, double y, const fl_options* opt, double* out) {
    FL_REQUIRE(m && out, "null argument");
    return guarded([&] {
        *out = b_value(*m->model, x, y, context(opt));
        return FL_OK;
    });
}

fl_status fl_v(const fl_model* m, double s, double x, const fl_options* opt, double* out) {
    FL_REQUIRE(m && out, "null argument");
    return guarded([&] {
        *out = v_of_x(make_problem(*m->model, s, context(opt), scale_of(opt)), x);
        return FL_OK;
    });
}

fl_status fl_psi(const fl_model* m, double s, double x, const fl_options* opt, double* out) {
    FL_REQUIRE(m && out, "null argument");
    return guarded([&] {
        *out = psi_of_x(make_problem(*m->model, s, context(opt), scale_of(opt)), x);
        return FL_OK;
    });
}

fl_status fl_density_at(const fl_model* m, double s, double x, const fl_options* opt, double* out) {
    FL_REQUIRE(m && out, "null argument");
    return guarded([&] {
        *out = density_at(make_problem(*m->model, s, context(opt), scale_of(opt)), x);
        return FL_OK;
    });
}

fl_status fl_atom(const fl_model* m, double s, const fl_options* opt, int* present, double* location,
                  double* mass) {
    FL_REQUIRE(m && present && location && mass, "null argument");
    return guarded([&] {
        const AtomRecord a = detect_atom(make_problem(*m->model, s, context(opt), scale_of(opt)));
        *present = a.present ? 1 : 0;
        *location = a.location;
        *mass = a.present ? a.mass : 0.0;
        return FL_OK;
    });
}

fl_status fl_curve_compute(const fl_model* m, double s, int auto_window, double lo, double hi, int points,
                           const fl_options* opt, fl_curve** out) {
    FL_REQUIRE(m && out, "null argument");
    return guarded([&] {
        auto c = std::make_unique<fl_curve>();
        c->model = m->model;
        c->problem = make_problem(*c->model, s, context(opt), scale_of(opt));
        c->curve = density_curve(c->problem, window_of(auto_window, lo, hi), points);
        c->samples = c->curve.samples();
        *out = c.release();
        return FL_OK;
    });
}

void fl_curve_free(fl_curve* c) { delete c; }

size_t fl_curve_size(const fl_curve* c) { return c ? c->samples.size() : 0; }

fl_status fl_curve_sample(const fl_curve* c, size_t i, fl_sample* out) {
    FL_REQUIRE(c && out, "null argument");
    FL_REQUIRE(i < c->samples.size(), "sample index out of range");
    const auto& s = c->samples[i];
    *out = {s.x, s.v, s.psi, s.f};
    last_error.clear();
    return FL_OK;
}

fl_status fl_curve_mass(const fl_curve* c, double* out) {
    FL_REQUIRE(c && out, "null argument");
    return guarded([&] {
        *out = curve_mass(c->curve);
        return FL_OK;
    });
}

fl_status fl_curve_csv(const fl_curve* c, char** out) {
    FL_REQUIRE(c && out, "null argument");
    return guarded([&] {
        *out = dup(curve_csv(c->curve));
        return FL_OK;
    });
}

fl_status fl_curve_report_json(const fl_curve* c, char** out) {
    FL_REQUIRE(c && out, "null argument");
    return guarded([&] {
        const AtomRecord atom = detect_atom(c->problem);
        json j = to_json(count_modes(c->curve, atom, &c->problem));
        j["mass"] = curve_mass(c->curve) + (atom.present ? atom.mass : 0.0);
        *out = dup(j.dump(2));
        return FL_OK;
    });
}

fl_status fl_report_json(const fl_model* m, double s, int auto_window, double lo, double hi, int points,
                         const fl_options* opt, char** out) {
    FL_REQUIRE(m && out, "null argument");
    return guarded([&] {
        const MeasureModel& model = *m->model;
        if (!model.has_triplet())
            throw Unclassifiable("report: model '" + model.name + "' has no triplet; classification needs one");
        const Problem p = make_problem(model, s, context(opt), scale_of(opt));
        const Classification cls = classify(p);
        json j;
        j["s"] = s;
        j["classification"] = to_json(cls);
        j["atom"] = to_json(cls.atom);
        try {
            j["threshold"] = to_json(unimodality_threshold(*model.triplet, p.ctx.reltol));
        } catch (const PointMassError&) {
            j["threshold"] = nullptr;
        }
        if (cls.tag == ClassTag::PointMass) {
            j["components"] = json::array();
            j["modes"] = json::array({{{"psi", cls.atom.location}, {"atom", true}, {"height", "inf"}}});
            j["unimodal"] = true;
            j["reason"] = "point mass";
        } else {
            const DensityCurve curve = density_curve(p, window_of(auto_window, lo, hi), points);
            const ModeReport rep = count_modes(curve, cls.atom, &p);
            const json r = to_json(rep);
            j["components"] = r["components"];
            j["modes"] = r["modes"];
            j["unimodal"] = rep.unimodal;
            j["reason"] = rep.reason;
            j["mass"] = curve_mass(curve) + (cls.atom.present ? cls.atom.mass : 0.0);
        }
        *out = dup(j.dump(2));
        return FL_OK;
    });
}

fl_status fl_validate_json(const fl_model* m, const fl_options* opt, char** out) {
    FL_REQUIRE(m && out, "null argument");
    return guarded([&] {
        *out = dup(to_json(validate(*m->model, context(opt).reltol)).dump(2));
        return FL_OK;
    });
}

namespace {

ThetaScan scan_of(const fl_model* m, double R, int n, const fl_options* opt) {
    if (!m->model->has_triplet()) throw Unclassifiable("theta scan: model has no Levy measure");
    return theta_scan(m->model->triplet->levy, R, n, context(opt).reltol);
}

}  // namespace

fl_status fl_theta_scan_json(const fl_model* m, double R, int n, const fl_options* opt, char** out) {
    FL_REQUIRE(m && out, "null argument");
    return guarded([&] {
        const ThetaScan sc = scan_of(m, R, n, opt);
        json j = to_json(sc);
        int first = 0;
        j["sign_changes"] = sign_changes(sc.values, 1e-9, &first);
        j["first_sign"] = first;
        *out = dup(j.dump(2));
        return FL_OK;
    });
}

fl_status fl_theta_scan_csv(const fl_model* m, double R, int n, const fl_options* opt, char** out) {
    FL_REQUIRE(m && out, "null argument");
    return guarded([&] {
        *out = dup(theta_csv(scan_of(m, R, n, opt)));
        return FL_OK;
    });
}

fl_status fl_reproduce(const char* case_id, const fl_options* opt, char** out) {
    FL_REQUIRE(case_id && out, "null argument");
    return guarded([&] {
        const auto results = reproduce(case_id, context(opt));
        *out = dup(format_table(results));
        for (const auto& r : results)
            if (!r.pass()) return fail(FL_ERR_REPRODUCTION_FAILED, "case " + r.id + " failed");
        return FL_OK;
    });
}

fl_status fl_case_ids_json(char** out) {
    FL_REQUIRE(out, "null argument");
    return guarded([&] {
        *out = dup(json(case_ids()).dump());
        return FL_OK;
    });
}

fl_stats fl_get_stats(void) {
    const QuadratureStats q = quadrature_stats();
    return {q.integrals, q.panels, q.worst_error};
}

void fl_reset_stats(void) { reset_quadrature_stats(); }

void fl_set_workers(unsigned n) { set_worker_count(n); }

}  // extern "C"
