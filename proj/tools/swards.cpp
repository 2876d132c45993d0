// swards: clustering for data with arbitrary symmetric dissimilarities.
// Subcommands: cluster, dim, voronoi, rand, gen.

#include <chrono>
#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "swards/cluster_state.hpp"
#include "swards/datagen.hpp"
#include "swards/dissimilarity.hpp"
#include "swards/environment.hpp"
#include "swards/error.hpp"
#include "swards/intrinsic_dim.hpp"
#include "swards/io.hpp"
#include "swards/metrics.hpp"
#include "swards/solver.hpp"
#include "swards/voronoi.hpp"

namespace {

using namespace swards;

struct MeasureOpts {
    std::string measure = "euclidean";
    std::string env_path;
    double sigma2 = 0.0; // 0: median heuristic
};

void add_measure_flags(CLI::App* cmd, MeasureOpts& mo) {
    cmd->add_option("--measure", mo.measure, "euclidean | rbf | barrier | region")
        ->check(CLI::IsMember({"euclidean", "rbf", "barrier", "region"}));
    cmd->add_option("--env", mo.env_path, "environment JSON (barrier/region measures)");
    cmd->add_option("--sigma2", mo.sigma2, "RBF bandwidth; default: median pairwise d^2");
}

std::unique_ptr<Measure> make_measure(const MeasureOpts& mo,
                                      const std::vector<Point>& points) {
    if (mo.measure == "euclidean")
        return std::make_unique<EuclideanMeasure>();
    if (mo.measure == "rbf") {
        double s2 = mo.sigma2 > 0.0 ? mo.sigma2 : median_sigma2(points);
        return std::make_unique<RbfMeasure>(s2);
    }
    if (mo.env_path.empty())
        throw input_error("--measure " + mo.measure + " requires --env");
    Environment env = load_environment(mo.env_path);
    if (mo.measure == "barrier")
        return std::make_unique<BarrierMeasure>(env);
    return std::make_unique<RegionMeasure>(env);
}

struct InputOpts {
    std::string points_path;
    std::string matrix_path;
};

// points (possibly empty) + matrix from either a points CSV run through the
// measure, or a precomputed matrix file
std::pair<PointsFile, DissimilarityMatrix> load_input(const InputOpts& io,
                                                      const MeasureOpts& mo) {
    if (io.points_path.empty() == io.matrix_path.empty())
        throw input_error("give exactly one of --input or --matrix");
    if (!io.matrix_path.empty())
        return {PointsFile{}, read_matrix(io.matrix_path)};
    PointsFile pf = read_points_csv(io.points_path);
    auto measure = make_measure(mo, pf.points);
    auto m = build_matrix(pf.points, *measure);
    return {std::move(pf), std::move(m)};
}

int cmd_cluster(const InputOpts& io, const MeasureOpts& mo, const std::string& criterion,
                std::size_t n_init, std::size_t k, const std::string& dim,
                std::size_t kmin, std::size_t kmax, double epsilon, std::size_t max_sweeps,
                std::size_t restarts, std::uint64_t seed, unsigned threads,
                double ss_floor_rel, const std::string& out_labels,
                const std::string& out_report) {
    auto t0 = std::chrono::steady_clock::now();
    auto [pf, matrix] = load_input(io, mo);

    ClusteringConfig cfg;
    cfg.flavor = criterion == "wards" ? Flavor::Wards : Flavor::SphericalWards;
    cfg.k = k;
    cfg.n_init_clusters = n_init;
    cfg.epsilon = epsilon;
    cfg.max_sweeps = max_sweeps;
    cfg.restarts = restarts;
    cfg.seed = seed;
    cfg.threads = threads;
    cfg.params.ss_floor_rel = ss_floor_rel;

    std::optional<double> dim_N;
    if (cfg.flavor == Flavor::SphericalWards) {
        if (dim == "auto") {
            DimEstimatorConfig dc;
            dc.k_min = kmin;
            dc.k_max = kmax;
            dim_N = mle_dimension(matrix, dc).N;
        } else {
            double v;
            if (!detail::parse_double(dim, v) || v <= 0.0)
                throw input_error("--dim needs 'auto' or a positive number");
            dim_N = v;
        }
        cfg.params.N = *dim_N;
    } else if (dim != "auto") {
        throw input_error("--dim applies to the swards criterion only");
    }

    auto runs = cluster_all_restarts(matrix, cfg);
    auto best = best_of_restarts(runs);
    auto t1 = std::chrono::steady_clock::now();

    if (!out_labels.empty())
        write_labels_csv(out_labels, best.partition.labels);
    if (!out_report.empty()) {
        RunReport rep;
        rep.config = {{"criterion", criterion},
                      {"measure", io.matrix_path.empty() ? mo.measure : "precomputed"},
                      {"n_init", n_init},
                      {"k", k},
                      {"epsilon", epsilon},
                      {"max_sweeps", max_sweeps},
                      {"restarts", restarts},
                      {"threads", threads},
                      {"ss_floor_rel", ss_floor_rel},
                      {"dim", dim}};
        rep.energy = best.energy;
        rep.n_clusters = best.n_clusters;
        rep.cluster_sizes.assign(best.n_clusters, 0);
        for (int l : best.partition.labels)
            rep.cluster_sizes[static_cast<std::size_t>(l)] += 1;
        rep.dimension_N = dim_N;
        rep.restarts_used = runs.size();
        for (const auto& r : runs)
            rep.sweeps_per_restart.push_back(r.sweeps_run);
        rep.wall_time_ms =
            std::chrono::duration<double, std::milli>(t1 - t0).count();
        rep.seed = seed;
        save_report(out_report, rep);
    }

    std::printf("clusters=%zu energy=%s restart=%zu sweeps=%zu", best.n_clusters,
                detail::fmt17(best.energy).c_str(), best.restart_index, best.sweeps_run);
    if (dim_N)
        std::printf(" N=%s", detail::fmt17(*dim_N).c_str());
    std::printf("\n");
    return 0;
}

int cmd_dim(const InputOpts& io, const MeasureOpts& mo, std::size_t kmin, std::size_t kmax,
            const std::string& zero_policy) {
    auto [pf, matrix] = load_input(io, mo);
    DimEstimatorConfig dc;
    dc.k_min = kmin;
    dc.k_max = kmax;
    dc.zero_policy = zero_policy == "error" ? ZeroDistancePolicy::Error
                                            : ZeroDistancePolicy::SkipPair;
    auto est = mle_dimension(matrix, dc);
    std::printf("N_hat,%s\n", detail::fmt17(est.N).c_str());
    std::printf("k,N_k\n");
    for (const auto& [k, Nk] : est.per_k)
        std::printf("%zu,%s\n", k, detail::fmt17(Nk).c_str());
    return 0;
}

int cmd_voronoi(const std::string& points_path, const std::string& labels_path,
                const MeasureOpts& mo, const std::string& criterion, const std::string& dim,
                const std::vector<double>& bbox_vals, std::size_t width, std::size_t height,
                const std::string& format, const std::string& out, unsigned threads) {
    PointsFile pf = read_points_csv(points_path);
    std::vector<int> labels = read_labels_csv(labels_path);
    if (labels.size() != pf.points.size())
        throw input_error("voronoi: labels count " + std::to_string(labels.size()) +
                          " does not match points count " + std::to_string(pf.points.size()));
    Partition part{labels, 0};
    part.compact();

    auto measure = make_measure(mo, pf.points);

    Rect bbox;
    if (!bbox_vals.empty()) {
        if (bbox_vals.size() != 4)
            throw input_error("--bbox needs xmin,ymin,xmax,ymax");
        bbox = {bbox_vals[0], bbox_vals[1], bbox_vals[2], bbox_vals[3]};
    } else if (!mo.env_path.empty()) {
        bbox = load_environment(mo.env_path).bbox;
    } else {
        double xmin = 1e300, ymin = 1e300, xmax = -1e300, ymax = -1e300;
        for (const auto& p : pf.points) {
            if (p.size() != 2)
                throw input_error("voronoi: needs 2-D points");
            xmin = std::min(xmin, p[0]);
            xmax = std::max(xmax, p[0]);
            ymin = std::min(ymin, p[1]);
            ymax = std::max(ymax, p[1]);
        }
        double mx = 0.05 * (xmax - xmin + 1e-12), my = 0.05 * (ymax - ymin + 1e-12);
        bbox = {xmin - mx, ymin - my, xmax + mx, ymax + my};
    }

    CriterionParams params;
    ScoreCriterion crit = criterion == "wards" ? ScoreCriterion::WardsKMeans
                                               : ScoreCriterion::SphericalWards;
    if (crit == ScoreCriterion::SphericalWards) {
        if (dim == "auto") {
            auto matrix = build_matrix(pf.points, *measure);
            params.N = mle_dimension(matrix, {}).N;
        } else {
            double v;
            if (!detail::parse_double(dim, v) || v <= 0.0)
                throw input_error("--dim needs 'auto' or a positive number");
            params.N = v;
        }
    }

    auto grid = rasterize(pf.points, part.labels, part.k, *measure, bbox, width, height,
                          crit, params, threads);
    if (format == "pgm")
        write_grid_pgm(out, grid, part.k);
    else
        write_grid_csv(out, grid);
    std::printf("grid %zux%zu clusters=%d written to %s\n", width, height, part.k,
                out.c_str());
    return 0;
}

int cmd_rand(const std::string& a_path, const std::string& b_path) {
    auto a = read_labels_csv(a_path);
    auto b = read_labels_csv(b_path);
    std::printf("%s\n", detail::fmt17(rand_index(a, b)).c_str());
    return 0;
}

int cmd_gen(const std::string& preset, double r, double omega, std::size_t n,
            std::size_t n_head, std::size_t n_ear, std::size_t t, double step,
            const std::vector<double>& seed_point, const std::string& env_path,
            std::uint64_t seed, const std::string& out, const std::string& out_env) {
    if (out.empty())
        throw input_error("gen: --out is required");
    if (preset == "mixture-scale" || preset == "mixture-unbalanced") {
        auto spec = preset == "mixture-scale" ? mixture_scale_preset(r, n, seed)
                                              : mixture_unbalanced_preset(omega, n, seed);
        auto data = sample_mixture(spec);
        write_points_csv(out, data.points, &data.labels);
    } else if (preset == "mouse") {
        MouseParams mp;
        mp.n_head = n_head;
        mp.n_ear = n_ear;
        mp.seed = seed;
        auto mouse = mouse_dataset(mp);
        write_points_csv(out, mouse.data.points, &mouse.data.labels);
        if (!out_env.empty())
            save_environment(out_env, mouse.env);
    } else if (preset == "walk") {
        if (env_path.empty())
            throw input_error("gen walk: --env is required");
        if (seed_point.size() != 2)
            throw input_error("gen walk: --seed-point needs x,y");
        WalkSpec ws;
        ws.env = load_environment(env_path);
        ws.seed_point = {seed_point[0], seed_point[1]};
        ws.n = n;
        ws.t = t;
        ws.step = step;
        ws.seed = seed;
        auto finals = random_walk(ws);
        std::vector<Point> pts;
        std::vector<int> labels(finals.size(), 0);
        for (Vec2 v : finals)
            pts.push_back({v.x, v.y});
        write_points_csv(out, pts, &labels);
    } else {
        throw input_error("gen: unknown preset '" + preset + "'");
    }
    std::printf("wrote %s\n", out.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spherical Wards clustering toolkit"};
    app.require_subcommand(1);

    // cluster
    auto* cl = app.add_subcommand("cluster", "cluster a data set");
    InputOpts cl_in;
    MeasureOpts cl_mo;
    std::string cl_criterion = "swards", cl_dim = "auto", cl_out_labels, cl_out_report;
    std::size_t cl_n_init = 10, cl_k = 2, cl_kmin = 10, cl_kmax = 20, cl_max_sweeps = 200,
                cl_restarts = 10;
    double cl_epsilon = 0.01, cl_floor = 1e-12;
    std::uint64_t cl_seed = 0;
    unsigned cl_threads = 1;
    cl->add_option("--input", cl_in.points_path, "points CSV");
    cl->add_option("--matrix", cl_in.matrix_path, "precomputed d^2 matrix (.csv or .bin)");
    add_measure_flags(cl, cl_mo);
    cl->add_option("--criterion", cl_criterion, "swards | wards")
        ->check(CLI::IsMember({"swards", "wards"}));
    cl->add_option("--n-init", cl_n_init, "initial clusters (swards)");
    cl->add_option("--k", cl_k, "cluster count (wards)");
    cl->add_option("--dim", cl_dim, "criterion dimension N: auto or a positive real");
    cl->add_option("--kmin", cl_kmin, "dimension estimator k_min");
    cl->add_option("--kmax", cl_kmax, "dimension estimator k_max");
    cl->add_option("--epsilon", cl_epsilon, "small-cluster removal threshold");
    cl->add_option("--max-sweeps", cl_max_sweeps, "sweep cap per restart");
    cl->add_option("--restarts", cl_restarts, "independent restarts");
    cl->add_option("--seed", cl_seed, "RNG seed");
    cl->add_option("--threads", cl_threads, "worker cap for restarts");
    cl->add_option("--ss-floor-rel", cl_floor, "relative ss floor (0 disables)");
    cl->add_option("--out-labels", cl_out_labels, "labels CSV output");
    cl->add_option("--out-report", cl_out_report, "run report JSON output");

    // dim
    auto* dm = app.add_subcommand("dim", "estimate intrinsic dimension");
    InputOpts dm_in;
    MeasureOpts dm_mo;
    std::size_t dm_kmin = 10, dm_kmax = 20;
    std::string dm_zero = "skip";
    dm->add_option("--input", dm_in.points_path, "points CSV");
    dm->add_option("--matrix", dm_in.matrix_path, "precomputed d^2 matrix");
    add_measure_flags(dm, dm_mo);
    dm->add_option("--kmin", dm_kmin, "smallest neighborhood size");
    dm->add_option("--kmax", dm_kmax, "largest neighborhood size");
    dm->add_option("--zero-policy", dm_zero, "skip | error")
        ->check(CLI::IsMember({"skip", "error"}));

    // voronoi
    auto* vo = app.add_subcommand("voronoi", "rasterize a generalized Voronoi diagram");
    std::string vo_points, vo_labels, vo_criterion = "swards", vo_dim = "auto",
                vo_format = "csv", vo_out;
    MeasureOpts vo_mo;
    std::vector<double> vo_bbox;
    std::size_t vo_width = 100, vo_height = 100;
    unsigned vo_threads = 1;
    vo->add_option("--points", vo_points, "points CSV")->required();
    vo->add_option("--labels", vo_labels, "labels CSV from cluster")->required();
    add_measure_flags(vo, vo_mo);
    vo->add_option("--criterion", vo_criterion, "swards | wards")
        ->check(CLI::IsMember({"swards", "wards"}));
    vo->add_option("--dim", vo_dim, "criterion dimension N: auto or a positive real");
    vo->add_option("--bbox", vo_bbox, "xmin,ymin,xmax,ymax")->delimiter(',');
    vo->add_option("--width", vo_width, "grid cells across");
    vo->add_option("--height", vo_height, "grid cells down");
    vo->add_option("--format", vo_format, "csv | pgm")
        ->check(CLI::IsMember({"csv", "pgm"}));
    vo->add_option("--out", vo_out, "output file")->required();
    vo->add_option("--threads", vo_threads, "worker cap for grid rows");

    // rand
    auto* ra = app.add_subcommand("rand", "Rand index of two labelings");
    std::string ra_a, ra_b;
    ra->add_option("a", ra_a, "first labels CSV")->required();
    ra->add_option("b", ra_b, "second labels CSV")->required();

    // gen
    auto* ge = app.add_subcommand("gen", "generate synthetic data");
    std::string ge_preset, ge_env, ge_out, ge_out_env;
    double ge_r = 0.5, ge_omega = 0.5, ge_step = 0.0;
    std::size_t ge_n = 800, ge_n_head = 800, ge_n_ear = 200, ge_t = 100;
    std::vector<double> ge_seed_point;
    std::uint64_t ge_seed = 0;
    ge->add_option("--preset", ge_preset,
                   "mixture-scale | mixture-unbalanced | mouse | walk")
        ->required();
    ge->add_option("--r", ge_r, "scale split for mixture-scale");
    ge->add_option("--omega", ge_omega, "weight for mixture-unbalanced");
    ge->add_option("--n", ge_n, "sample count (mixtures, walk)");
    ge->add_option("--n-head", ge_n_head, "mouse head points");
    ge->add_option("--n-ear", ge_n_ear, "mouse points per ear");
    ge->add_option("--t", ge_t, "walk steps");
    ge->add_option("--step", ge_step, "walk step length (0: 5% of bbox)");
    ge->add_option("--seed-point", ge_seed_point, "walk start x,y")->delimiter(',');
    ge->add_option("--env", ge_env, "walk environment JSON");
    ge->add_option("--seed", ge_seed, "RNG seed");
    ge->add_option("--out", ge_out, "points CSV output")->required();
    ge->add_option("--out-env", ge_out_env, "environment JSON output (mouse)");

    try {
        app.parse(argc, argv);
        if (cl->parsed())
            return cmd_cluster(cl_in, cl_mo, cl_criterion, cl_n_init, cl_k, cl_dim, cl_kmin,
                               cl_kmax, cl_epsilon, cl_max_sweeps, cl_restarts, cl_seed,
                               cl_threads, cl_floor, cl_out_labels, cl_out_report);
        if (dm->parsed())
            return cmd_dim(dm_in, dm_mo, dm_kmin, dm_kmax, dm_zero);
        if (vo->parsed())
            return cmd_voronoi(vo_points, vo_labels, vo_mo, vo_criterion, vo_dim, vo_bbox,
                               vo_width, vo_height, vo_format, vo_out, vo_threads);
        if (ra->parsed())
            return cmd_rand(ra_a, ra_b);
        if (ge->parsed())
            return cmd_gen(ge_preset, ge_r, ge_omega, ge_n, ge_n_head, ge_n_ear, ge_t,
                           ge_step, ge_seed_point, ge_env, ge_seed, ge_out, ge_out_env);
        return 2;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) // --help
            return app.exit(e);
        app.exit(e);
        return 2;
    } catch (const swards::input_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const swards::degenerate_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
