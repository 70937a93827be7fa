// epfano: exceptional points and Fano-like line shapes of a driven oscillator pair.
//
//   epfano find-ep           --params P [-o out.json]
//   epfano reduce            --params P [--method secular|projection] [--gauge G] [-o out.json]
//   epfano cross-section     --params P [--f F | --f-offset D] [--svg plot.svg] [-o out.csv]
//   epfano trajectory        --params P [--f-min A --f-max B --points N] [--svg plot.svg] [-o out.csv]
//   epfano verify-stationary --params P --omega-drive W [--dt H] [--t-settle T]
//
// Exit status: 0 ok, 1 numerical failure, 2 usage or schema error. Failures
// print one line "error: kind=<kind> message=<text>" on stderr.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "epfano/constants.hpp"
#include "epfano/epfinder.hpp"
#include "epfano/io.hpp"
#include "epfano/reduction.hpp"
#include "epfano/scattering.hpp"
#include "epfano/svg.hpp"
#include "epfano/timedomain.hpp"

namespace {

using namespace epfano;
namespace C = epfano::constants;

struct UsageError : Error {
    explicit UsageError(const std::string& what) : Error("usage", what) {}
};

void emit(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") std::cout << text;
    else write_text_file(path, text);
}

nlohmann::ordered_json complex_json(cplx z)
{
    return nlohmann::ordered_json::array({z.real(), z.imag()});
}

nlohmann::ordered_json matrix_json(const Mat2& m)
{
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < 2; ++i) rows.push_back({complex_json(m(i, 0)), complex_json(m(i, 1))});
    return rows;
}

void require_finite(double v, const char* name)
{
    if (!std::isfinite(v)) throw UsageError(std::string("option ") + name + " must be finite");
}

std::string ep_json(const ExceptionalPoint& ep)
{
    nlohmann::ordered_json j;
    j["omega_ep_re"] = ep.omega.real();
    j["omega_ep_im"] = ep.omega.imag();
    j["f_ep"] = ep.f;
    j["g_ep"] = ep.g;
    j["residual"] = ep.residual;
    j["physical"] = ep.physical;
    return j.dump(2) + "\n";
}

int run(int argc, char** argv)
{
    CLI::App app{"Exceptional points and Fano-like line shapes of a driven oscillator pair"};
    app.require_subcommand(1);
    std::string params_path;
    std::string output;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--params,-p", params_path, "JSON parameter file")->required();
        sub->add_option("--output,-o", output, "output file (default stdout)");
    };

    // find-ep
    auto* find = app.add_subcommand("find-ep", "locate the physical exceptional point");
    common(find);
    std::optional<double> scan_f_min, scan_f_max, scan_g_min, scan_g_max;
    int scan_grid = C::kScanGrid;
    find->add_option("--f-min", scan_f_min, "seed scan: lower f");
    find->add_option("--f-max", scan_f_max, "seed scan: upper f");
    find->add_option("--g-min", scan_g_min, "seed scan: lower g");
    find->add_option("--g-max", scan_g_max, "seed scan: upper g");
    find->add_option("--grid", scan_grid, "seed scan grid size")->check(CLI::Range(2, 1000));

    // reduce
    auto* reduce = app.add_subcommand("reduce", "effective two-level model at the EP");
    common(reduce);
    std::string method = "secular";
    std::string gauge = "symmetric-delta";
    std::optional<double> f_ref;
    reduce->add_option("--method", method, "secular or projection")->check(CLI::IsMember({"secular", "projection"}));
    reduce->add_option("--f-ref", f_ref, "projection reference coupling (default f_EP + 0.5)");
    auto add_gauge = [&](CLI::App* sub) {
        sub->add_option("--gauge", gauge, "symmetric-delta or as-projected")
            ->check(CLI::IsMember({"symmetric-delta", "as-projected"}));
    };
    add_gauge(reduce);

    // cross-section
    auto* xs = app.add_subcommand("cross-section", "scan |T11|^2, |T22|^2 and the pole interference over energy");
    common(xs);
    add_gauge(xs);
    std::optional<double> f_abs;
    double f_offset = 0.0;
    double e_min = C::kEnergyMin, e_max = C::kEnergyMax, scale = 1.0;
    int e_points = C::kEnergyPoints;
    bool include_background = false;
    std::string svg_path;
    auto* f_opt = xs->add_option("--f", f_abs, "absolute coupling f");
    xs->add_option("--f-offset", f_offset, "coupling relative to f_EP")->excludes(f_opt);
    xs->add_option("--e-min", e_min, "lower energy");
    xs->add_option("--e-max", e_max, "upper energy");
    xs->add_option("--points", e_points, "energy grid points")->check(CLI::Range(2, 10000000));
    xs->add_option("--scale", scale, "overall real factor on T");
    xs->add_flag("--include-background", include_background, "add the constant v to T");
    xs->add_option("--svg", svg_path, "also write a two-panel SVG");

    // trajectory
    auto* traj = app.add_subcommand("trajectory", "resonance energies of the full and reduced problems versus f");
    common(traj);
    add_gauge(traj);
    double f_min = C::kTrajectoryFMin, f_max = C::kTrajectoryFMax;
    int f_points = C::kTrajectoryPoints;
    traj->add_option("--f-min", f_min, "lower f");
    traj->add_option("--f-max", f_max, "upper f");
    traj->add_option("--points", f_points, "f grid points")->check(CLI::Range(2, 10000000));
    traj->add_option("--svg", svg_path, "also write a complex-plane SVG");

    // verify-stationary
    auto* stat = app.add_subcommand("verify-stationary", "compare RK4 against the stationary solution");
    common(stat);
    double omega_drive = 0.0, dt = 1e-3;
    std::optional<double> t_settle;
    double threshold = C::kStationaryThreshold;
    stat->add_option("--omega-drive", omega_drive, "drive frequency")->required();
    stat->add_option("--dt", dt, "RK4 step");
    stat->add_option("--t-settle", t_settle, "settling time (default 40 e-foldings of the slowest mode)");
    stat->add_option("--threshold", threshold, "pass threshold on the relative residual");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    const OscillatorParams params = load_params(params_path);
    params.validate();

    if (find->parsed()) {
        ExceptionalPoint ep;
        if (scan_f_min || scan_f_max || scan_g_min || scan_g_max) {
            const double f0 = scan_f_min.value_or(C::kScanFMin), f1 = scan_f_max.value_or(C::kScanFMax);
            const double g0 = scan_g_min.value_or(C::kScanGMin), g1 = scan_g_max.value_or(C::kScanGMax);
            for (const double v : {f0, f1, g0, g1}) require_finite(v, "scan range");
            const auto best = select_physical(scan_seeds(params, {f0, f1}, {g0, g1}, scan_grid));
            if (!best) throw ConvergenceError("no exceptional point found in the scan box", {});
            ep = *best;
        } else {
            ep = locate_physical_ep(params);
        }
        emit(output, ep_json(ep));
        return 0;
    }

    const Gauge gauge_v = parse_gauge(gauge);
    const ExceptionalPoint ep = locate_physical_ep(params);

    if (reduce->parsed()) {
        EffectiveModel model;
        if (parse_method(method) == ReductionMethod::Projection) {
            const double fr = f_ref.value_or(ep.f + C::kProjectionOffset);
            require_finite(fr, "--f-ref");
            model = reduce_projection(params.with_coupling(ep.f, ep.g), fr, gauge_v);
        } else {
            model = reduce_secular(params, ep, gauge_v);
        }
        nlohmann::ordered_json j;
        j["method"] = std::string(to_string(model.method));
        j["gauge"] = std::string(to_string(model.gauge));
        j["f_ref"] = model.f_ref;
        j["g"] = ep.g;
        j["h0"] = matrix_json(model.h0);
        j["v"] = matrix_json(model.v);
        auto eps = nlohmann::ordered_json::array();
        for (const auto& e : ep_of_effective(model))
            eps.push_back({{"f", complex_json(e.f)}, {"omega", complex_json(e.omega)}, {"diabolic", e.diabolic}});
        j["effective_eps"] = eps;
        emit(output, j.dump(2) + "\n");
        return 0;
    }

    const EffectiveModel model = reduce_secular(params, ep, gauge_v);

    if (xs->parsed()) {
        const double f = f_abs.value_or(ep.f + f_offset);
        for (const double v : {f, e_min, e_max, scale}) require_finite(v, "cross-section");
        const auto samples = cross_section_scan(model, f, e_min, e_max, e_points, {include_background, scale});
        emit(output, cross_section_csv(samples));
        if (!svg_path.empty())
            write_text_file(svg_path, cross_section_svg(samples, "f = " + format_number(f)));
        return 0;
    }

    if (traj->parsed()) {
        for (const double v : {f_min, f_max}) require_finite(v, "trajectory");
        const OscillatorParams at_ep = params.with_coupling(ep.f, ep.g);
        const Trajectory full = eigen_trajectory(at_ep, f_min, f_max, f_points);
        const Trajectory red = eigen_trajectory(model, f_min, f_max, f_points);
        std::string csv = trajectory_csv_header();
        append_trajectory_csv(csv, full);
        append_trajectory_csv(csv, red);
        emit(output, csv);
        if (!svg_path.empty()) write_text_file(svg_path, trajectory_svg(full, red, "g = " + format_number(ep.g)));
        return 0;
    }

    // verify-stationary
    require_finite(omega_drive, "--omega-drive");
    const double ts = t_settle.value_or(default_settle_time(params));
    const double residual = stationary_residual(params, omega_drive, ts, dt);
    std::string line = "residual " + format_number(residual) + (residual < threshold ? " ok\n" : " above threshold\n");
    emit(output, line);
    if (!(residual < threshold)) {
        std::cerr << "error: kind=threshold message=stationary residual " << format_number(residual)
                  << " exceeds " << format_number(threshold) << "\n";
        return 1;
    }
    return 0;
}

int exit_code(const Error& e)
{
    const std::string& k = e.kind();
    return (k == "usage" || k == "schema" || k == "parameter") ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
    try {
        return run(argc, argv);
    } catch (const Error& e) {
        std::cerr << "error: kind=" << e.kind() << " message=" << e.what() << "\n";
        return exit_code(e);
    } catch (const std::exception& e) {
        std::cerr << "error: kind=internal message=" << e.what() << "\n";
        return 1;
    }
}
