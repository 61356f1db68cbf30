// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: ingest MNIST IDX data, train truncated tSVD bases,
// evaluate classification, emit identification artifacts (ROC curves,
// similarity heatmap, singular-tube norms), and run the built-in selftest.
//
// Exit codes: 0 ok, 1 usage, 2 parse, 3 dims, 4 I/O, 5 manifest mismatch,
// 6 selftest failure.

#include <CLI11.hpp>
#include <json.hpp>
#include <zlib.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "tubal/classifier.hpp"
#include "tubal/identification.hpp"
#include "tubal/mnist.hpp"
#include "tubal/tsvd.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tubal;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitDims = 3;
constexpr int kExitIo = 4;
constexpr int kExitManifest = 5;
constexpr int kExitSelftest = 6;

struct RunConfig {
    std::string train_images, train_labels, test_images, test_labels;
    std::vector<Index> ks;
    std::string normalize = "unit";
    int threads = std::max(1u, std::thread::hardware_concurrency());
    std::string out = "out";
    int bins = 4096;
    std::uint64_t seed = 0;
    std::string rows_range, cols_range;
    bool inject_fault = false;
};

std::uint32_t file_crc32(const std::string& path) {
    const auto bytes = read_file(path);
    return static_cast<std::uint32_t>(
        ::crc32(0L, reinterpret_cast<const Bytef*>(bytes.data()), uInt(bytes.size())));
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for writing: " + path.string());
    return os;
}

// --- train -------------------------------------------------------------------

int cmd_train(const RunConfig& cfg) {
    if (cfg.ks.size() != 1)
        throw CLI::ValidationError("--k", "train expects exactly one truncation value");
    const Index k = cfg.ks[0];
    const Normalization norm = normalization_from_string(cfg.normalize);

    const ImageSet train_set = ImageSet::load(cfg.train_images, cfg.train_labels);
    const ClassPartition part = build_class_partition(train_set, norm);

    fs::create_directories(cfg.out);
    json manifest;
    manifest["format"] = "tubal-basis-manifest";
    manifest["version"] = 1;
    manifest["k"] = k;
    manifest["ell"] = part.tensors[0].ell();
    manifest["n"] = part.tensors[0].n();
    manifest["normalization"] = to_string(norm);
    manifest["train_counts"] = part.counts;
    manifest["files"] = json::array();

    std::int64_t basis_values = 0;
    for (int d = 0; d < 10; ++d) {
        if (part.counts[std::size_t(d)] == 0)
            throw DimensionError("train: class " + std::to_string(d) + " has no images");
        const Tensor3& t = part.tensors[std::size_t(d)];
        const TsvdFactors f = train_class_factors(t, k, cfg.threads);
        const std::string name = "basis_" + std::to_string(d) + ".tsvd";
        const fs::path path = fs::path(cfg.out) / name;
        save_factors(f, path.string(), /*original_m=*/t.m());
        manifest["files"].push_back(
            {{"label", d}, {"file", name}, {"crc32", file_crc32(path.string())}});
        basis_values += f.u.size();
        std::cout << "class " << d << ": " << t.ell() << "x" << t.m() << "x" << t.n()
                  << " -> basis " << f.u.ell() << "x" << f.u.m() << "x" << f.u.n() << "\n";
    }
    auto os = open_out(fs::path(cfg.out) / "manifest.json");
    os << manifest.dump(2) << "\n";

    std::cout << "stored " << basis_values << " basis values for "
              << (train_set.count * train_set.rows * train_set.cols) << " training pixels\n";
    return kExitOk;
}

// --- basis loading shared by evaluate/identify --------------------------------

struct LoadedBases {
    json manifest;
    std::vector<TsvdFactors> factors;  // label d at index d
    Index k_file = 0;
    Index ell = 0, n = 0;
    Normalization normalization = Normalization::unit;
};

LoadedBases load_bases(const std::string& dir) {
    const fs::path manifest_path = fs::path(dir) / "manifest.json";
    std::ifstream is(manifest_path);
    if (!is) throw IoError("cannot open: " + manifest_path.string());
    LoadedBases out;
    try {
        out.manifest = json::parse(is);
        out.k_file = out.manifest.at("k").get<Index>();
        out.ell = out.manifest.at("ell").get<Index>();
        out.n = out.manifest.at("n").get<Index>();
        out.normalization =
            normalization_from_string(out.manifest.at("normalization").get<std::string>());
        out.factors.resize(10);
        for (const auto& entry : out.manifest.at("files")) {
            const int label = entry.at("label").get<int>();
            const fs::path path = fs::path(dir) / entry.at("file").get<std::string>();
            if (file_crc32(path.string()) != entry.at("crc32").get<std::uint32_t>())
                throw ManifestError("basis checksum mismatch: " + path.string());
            TsvdFactors f = load_factors(path.string());
            if (f.u.ell() != out.ell || f.u.n() != out.n || f.tubal_rank() != out.k_file)
                throw ManifestError("basis dims disagree with manifest: " + path.string());
            out.factors[std::size_t(label)] = std::move(f);
        }
    } catch (const json::exception& e) {
        throw ManifestError("malformed manifest " + manifest_path.string() + ": " + e.what());
    }
    for (int d = 0; d < 10; ++d)
        if (out.factors[std::size_t(d)].u.size() == 0)
            throw ManifestError("manifest lists no basis for class " + std::to_string(d));
    return out;
}

ClassBasisSet bases_at_k(const LoadedBases& loaded, Index k) {
    if (k < 1 || k > loaded.k_file)
        throw ManifestError("requested k = " + std::to_string(k) +
                            " exceeds trained truncation k = " + std::to_string(loaded.k_file));
    ClassBasisSet bases(loaded.ell, loaded.n, k);
    for (int d = 0; d < 10; ++d) {
        const TsvdFactors& f = loaded.factors[std::size_t(d)];
        bases.add_basis(d, k == loaded.k_file ? f.u : truncate(f, k).u);
    }
    return bases;
}

ClassPartition load_test_partition(const RunConfig& cfg, const LoadedBases& loaded) {
    const ImageSet test_set = ImageSet::load(cfg.test_images, cfg.test_labels);
    const ClassPartition part = build_class_partition(test_set, loaded.normalization);
    if (test_set.rows != loaded.ell || test_set.cols != loaded.n)
        throw ManifestError("bases are " + std::to_string(loaded.ell) + "x.x" +
                            std::to_string(loaded.n) + " but test images are " +
                            std::to_string(test_set.rows) + "x" + std::to_string(test_set.cols));
    return part;
}

// --- evaluate ------------------------------------------------------------------

int cmd_evaluate(const RunConfig& cfg) {
    if (cfg.ks.empty()) throw CLI::ValidationError("--k", "evaluate needs at least one k");
    const LoadedBases loaded = load_bases(cfg.out);
    const ClassPartition test = load_test_partition(cfg, loaded);

    std::vector<std::pair<Index, double>> rates;
    for (const Index k : cfg.ks) {
        const ClassBasisSet bases = bases_at_k(loaded, k);
        const ClassificationReport report = evaluate(bases, test, cfg.threads);
        rates.emplace_back(k, report.overall_rate);

        auto digits = open_out(fs::path(cfg.out) / ("per_digit_k" + std::to_string(k) + ".csv"));
        write_per_digit_csv(report, digits);
        auto conf = open_out(fs::path(cfg.out) / ("confusion_k" + std::to_string(k) + ".csv"));
        write_confusion_csv(report, conf);

        std::cout << "k=" << k << " r=" << std::fixed << std::setprecision(2)
                  << report.overall_rate * 100.0 << std::defaultfloat << "\n";
    }
    auto acc = open_out(fs::path(cfg.out) / "accuracy.csv");
    write_accuracy_csv(rates, acc);
    return kExitOk;
}

// --- identify ------------------------------------------------------------------

std::pair<std::int64_t, std::int64_t> parse_range(const std::string& text, std::int64_t limit,
                                                  const std::string& flag) {
    if (text.empty()) return {0, limit};
    const auto colon = text.find(':');
    std::int64_t begin = 0, end = limit;
    try {
        if (colon == std::string::npos) throw std::invalid_argument("missing ':'");
        if (colon > 0) begin = std::stoll(text.substr(0, colon));
        if (colon + 1 < text.size()) end = std::stoll(text.substr(colon + 1));
    } catch (const std::exception&) {
        throw CLI::ValidationError(flag, "expected begin:end, got '" + text + "'");
    }
    if (begin < 0 || end > limit || begin >= end)
        throw CLI::ValidationError(flag, "empty or out-of-bounds range '" + text + "'");
    return {begin, end};
}

int cmd_identify(const RunConfig& cfg) {
    if (cfg.ks.empty()) throw CLI::ValidationError("--ks", "identify needs at least one k");
    const LoadedBases loaded = load_bases(cfg.out);
    const ClassPartition test = load_test_partition(cfg, loaded);

    // Singular-tube norms per class (one column per digit over the stored k).
    {
        auto os = open_out(fs::path(cfg.out) / "tube_spectrum.csv");
        os << "index";
        for (int d = 0; d < 10; ++d) os << ",class_" << d;
        os << "\n";
        std::vector<TubeSpectrum> spectra;
        for (int d = 0; d < 10; ++d)
            spectra.push_back(tube_spectrum(loaded.factors[std::size_t(d)]));
        for (Index i = 0; i < loaded.k_file; ++i) {
            os << i;
            for (int d = 0; d < 10; ++d) {
                os << ',';
                detail::put_f64_csv(os, spectra[std::size_t(d)].norms[std::size_t(i)]);
            }
            os << "\n";
        }
    }

    bool wrote_heatmap = false;
    for (const Index k : cfg.ks) {
        const ClassBasisSet bases = bases_at_k(loaded, k);
        const auto features = feature_vectors(bases, test, cfg.threads);
        const RocCurve curve = roc_curve(features, cfg.bins, cfg.threads);
        auto os = open_out(fs::path(cfg.out) / ("roc_k" + std::to_string(k) + ".csv"));
        write_roc_csv(curve, os);
        std::cout << "k=" << k << " auc=" << std::fixed << std::setprecision(4) << auc(curve)
                  << std::defaultfloat << " (pairs: " << curve.positives << " positive, "
                  << curve.negatives << " negative)\n";

        if (!wrote_heatmap) {
            // Fig. 6 artifact for the first requested k: digit-ordered scores
            // windowed to [0.98, 1].
            const auto order = order_by_label(features);
            const auto total = static_cast<std::int64_t>(features.size());
            const auto [rb, re] = parse_range(cfg.rows_range, total, "--rows");
            const auto [cb, ce] = parse_range(cfg.cols_range, total, "--cols");
            auto pgm = open_out(fs::path(cfg.out) / ("heatmap_k" + std::to_string(k) + ".pgm"));
            write_similarity_pgm(features, order, rb, re, cb, ce, pgm);
            wrote_heatmap = true;
        }
    }
    return kExitOk;
}

// --- selftest ------------------------------------------------------------------

class Suite {
public:
    Suite(std::string name, bool& any_failed) : name_(std::move(name)), any_failed_(any_failed) {}
    ~Suite() {
        std::cout << name_ << ": " << passed_ << "/" << total_ << " checks passed\n";
    }
    void expect(bool ok, const std::string& what) {
        ++total_;
        if (ok) {
            ++passed_;
        } else {
            any_failed_ = true;
            std::cout << name_ << ": FAILED " << what << "\n";
        }
    }

private:
    std::string name_;
    bool& any_failed_;
    int passed_ = 0;
    int total_ = 0;
};

Tensor3 selftest_random(std::mt19937_64& rng, Index ell, Index m, Index n) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Tensor3 t(ell, m, n);
    for (Index k = 0; k < n; ++k)
        for (Index j = 0; j < m; ++j)
            for (Index i = 0; i < ell; ++i) t(i, j, k) = dist(rng);
    return t;
}

double selftest_rel(const Tensor3& got, const Tensor3& want) {
    Tensor3 diff = got;
    for (Index k = 0; k < got.n(); ++k) diff.frontal(k) -= want.frontal(k);
    const double denom = frob_norm(want);
    return frob_norm(diff) / (denom > 0 ? denom : 1.0);
}

int cmd_selftest(const RunConfig& cfg) {
    bool failed = false;
    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<Index> dim(1, 8);

    {
        Suite s("tensor_core", failed);
        const Tensor3 a = selftest_random(rng, 3, 4, 5);
        s.expect(fold(unfold(a), 3, 4, 5).data() == a.data(), "fold/unfold round trip");
        s.expect(bcirc(a).leftCols(4) == unfold(a), "bcirc first block column");
        s.expect(ttranspose(ttranspose(a)).data() == a.data(), "transpose involution");
        s.expect(selftest_rel(tprod_reference(identity_tensor(3, 5), a), a) < 1e-14,
                 "identity t-product");
        // --inject-fault (test fixture) skews this check so the failure path is exercisable
        const double skew = cfg.inject_fault ? 1.0 : 0.0;
        s.expect(frob_norm(a) + skew == frob_norm(unfold(a)), "frobenius/unfold parity");
        bool reverse_ok = true;
        for (int t = 0; t < 5; ++t) {
            const Tensor3 x = selftest_random(rng, dim(rng), 3, 4);
            const Tensor3 y = selftest_random(rng, 3, dim(rng), 4);
            reverse_ok &= selftest_rel(ttranspose(tprod_reference(x, y)),
                                       tprod_reference(ttranspose(y), ttranspose(x))) < 1e-12;
        }
        s.expect(reverse_ok, "reverse-order law");
    }
    {
        Suite s("spectral_engine", failed);
        bool roundtrip = true, parseval = true, oracle = true, assoc = true;
        for (int t = 0; t < 10; ++t) {
            const Tensor3 a = selftest_random(rng, dim(rng), dim(rng), dim(rng));
            roundtrip &= selftest_rel(idft_tubes(dft_tubes(a)), a) < 1e-13;
            parseval &= std::abs(parseval_norm(dft_tubes(a)) - frob_norm(a)) <=
                        1e-12 * std::max(1.0, frob_norm(a));
            const Tensor3 b = selftest_random(rng, a.m(), dim(rng), a.n());
            oracle &= selftest_rel(tprod_fast(a, b), tprod_reference(a, b)) < 1e-11;
        }
        for (int t = 0; t < 5; ++t) {
            const Index n = dim(rng);
            const Tensor3 a = selftest_random(rng, dim(rng), 3, n);
            const Tensor3 b = selftest_random(rng, 3, dim(rng), n);
            const Tensor3 c = selftest_random(rng, b.m(), dim(rng), n);
            assoc &= selftest_rel(tprod_fast(tprod_fast(a, b), c),
                                  tprod_fast(a, tprod_fast(b, c))) < 1e-10;
        }
        s.expect(roundtrip, "dft/idft round trip");
        s.expect(parseval, "parseval identity");
        s.expect(oracle, "tprod_fast vs dense reference");
        s.expect(assoc, "associativity");
    }
    {
        Suite s("tsvd", failed);
        bool recon = true, ortho = true, fdiag = true, monotone = true, project = true;
        for (int t = 0; t < 8; ++t) {
            const Tensor3 a = selftest_random(rng, 2 + dim(rng), 2 + dim(rng), dim(rng));
            const TsvdFactors f = tsvd(a, {.threads = cfg.threads});
            recon &= selftest_rel(tprod_fast(tprod_fast(f.u, f.s), ttranspose(f.v)), a) < 1e-10;
            const Tensor3 gram = tprod_fast(ttranspose(f.u), f.u);
            ortho &= selftest_rel(gram, identity_tensor(f.tubal_rank(), a.n())) *
                         frob_norm(identity_tensor(f.tubal_rank(), a.n())) <
                     1e-10;
            fdiag &= is_f_diagonal(f.s, 1e-10 * std::max(1.0, frob_norm(f.s)));
            try {
                tube_spectrum(f);
            } catch (const IntegrityError&) {
                monotone = false;
            }
            const Index k = std::min<Index>(2, f.tubal_rank());
            const Tensor3 u = truncate(f, k).u;
            const Tensor3 b = selftest_random(rng, a.ell(), 1, a.n());
            const Tensor3 proj = tprod_reference(u, tprod_reference(ttranspose(u), b));
            Tensor3 diff = b;
            for (Index kk = 0; kk < b.n(); ++kk) diff.frontal(kk) -= proj.frontal(kk);
            project &= std::abs(project_residual(u, b) - frob_norm(diff)) <=
                       1e-10 * std::max(1.0, frob_norm(b));
        }
        s.expect(recon, "reconstruction");
        s.expect(ortho, "one-sided orthogonality");
        s.expect(fdiag, "f-diagonal S");
        s.expect(monotone, "tube-norm monotonicity");
        s.expect(project, "projection vs dense oracle");

        bool optimal = true;
        for (int t = 0; t < 2; ++t) {
            const Tensor3 a = selftest_random(rng, 6, 5, 4);
            const Tensor3 ak = [&] {
                const TsvdFactors fk = truncate(tsvd(a), 2);
                return tprod_fast(tprod_fast(fk.u, fk.s), ttranspose(fk.v));
            }();
            Tensor3 best_diff = a;
            for (Index kk = 0; kk < a.n(); ++kk) best_diff.frontal(kk) -= ak.frontal(kk);
            const double best = frob_norm(best_diff);
            for (int trial = 0; trial < 50; ++trial) {
                const Tensor3 xy =
                    tprod_fast(selftest_random(rng, 6, 2, 4), selftest_random(rng, 2, 5, 4));
                Tensor3 diff = a;
                for (Index kk = 0; kk < a.n(); ++kk) diff.frontal(kk) -= xy.frontal(kk);
                optimal &= best <= frob_norm(diff);
            }
        }
        s.expect(optimal, "truncation optimality witness");

        const TsvdFactors f = truncate(tsvd(selftest_random(rng, 5, 4, 3)), 2);
        std::stringstream buf;
        save_factors(f, buf);
        const TsvdFactors g = load_factors(buf);
        s.expect(f.u.data() == g.u.data() && f.s.data() == g.s.data() &&
                     f.v.data() == g.v.data(),
                 "serialization round trip");
    }
    {
        Suite s("identification", failed);
        std::uniform_real_distribution<double> value(0.05, 1.0);
        std::uniform_int_distribution<int> label(0, 3);
        std::vector<FeatureVector> features;
        for (int i = 0; i < 100; ++i) {
            std::vector<double> v(10);
            for (double& x : v) x = value(rng);
            features.push_back({std::move(v), label(rng)});
        }
        const int bins = 32;
        const RocCurve hist = roc_curve(features, bins, cfg.threads);
        bool match = true, monotone = true;
        // exhaustive oracle
        std::vector<double> pos, neg;
        for (std::size_t i = 0; i < features.size(); ++i)
            for (std::size_t j = i + 1; j < features.size(); ++j) {
                const double sc = cosine_similarity(features[i], features[j]);
                (features[i].true_label == features[j].true_label ? pos : neg).push_back(sc);
            }
        for (int t = 0; t <= bins; ++t) {
            const double thr = double(t) / bins;
            std::int64_t gp = 0, gn = 0;
            for (double x : pos) gp += x >= thr;
            for (double x : neg) gn += x >= thr;
            const auto& point = hist.points[std::size_t(1 + bins - t)];
            match &= point.tpr == double(gp) / double(pos.size());
            match &= point.fpr == double(gn) / double(neg.size());
        }
        for (std::size_t i = 1; i < hist.points.size(); ++i) {
            monotone &= hist.points[i - 1].fpr <= hist.points[i].fpr;
            monotone &= hist.points[i - 1].tpr <= hist.points[i].tpr;
        }
        s.expect(std::int64_t(pos.size()) == hist.positives, "positive pair count");
        s.expect(match, "histogram ROC vs exhaustive pairs");
        s.expect(monotone, "ROC monotonicity");
        s.expect(hist.points.front().tpr == 0.0 && hist.points.back().tpr == 1.0,
                 "ROC endpoints");
    }

    if (failed) {
        std::cout << "selftest: FAILED\n";
        return kExitSelftest;
    }
    std::cout << "selftest: OK\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"t-product tensor algebra, tensor SVD, and MNIST digit classification"};
    app.require_subcommand(1);

    RunConfig cfg;
    const auto add_common = [&cfg](CLI::App* cmd) {
        cmd->set_config("--config", "", "plain-text key=value configuration file (flags win)");
        cmd->add_option("--threads", cfg.threads, "worker pool size")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        cmd->add_option("--out", cfg.out, "experiment directory (bases, manifest, reports)")
            ->capture_default_str();
    };

    CLI::App* train_cmd = app.add_subcommand("train", "train per-class truncated tSVD bases");
    train_cmd->add_option("--train-images", cfg.train_images, "IDX image file (optionally .gz)")
        ->required();
    train_cmd->add_option("--train-labels", cfg.train_labels, "IDX label file (optionally .gz)")
        ->required();
    train_cmd->add_option("--k", cfg.ks, "truncation (tubal rank)")
        ->required()
        ->check(CLI::PositiveNumber);
    train_cmd->add_option("--normalize", cfg.normalize, "pixel normalization: none|unit")
        ->check(CLI::IsMember({"none", "unit"}))
        ->capture_default_str();
    add_common(train_cmd);

    CLI::App* eval_cmd = app.add_subcommand("evaluate", "classify the test set, write reports");
    eval_cmd->add_option("--test-images", cfg.test_images, "IDX image file")->required();
    eval_cmd->add_option("--test-labels", cfg.test_labels, "IDX label file")->required();
    eval_cmd->add_option("--k,--ks", cfg.ks, "truncation(s); sweep with a comma list")
        ->required()
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    add_common(eval_cmd);

    CLI::App* ident_cmd =
        app.add_subcommand("identify", "pairwise identification: ROC, heatmap, tube norms");
    ident_cmd->add_option("--test-images", cfg.test_images, "IDX image file")->required();
    ident_cmd->add_option("--test-labels", cfg.test_labels, "IDX label file")->required();
    ident_cmd->add_option("--k,--ks", cfg.ks, "truncation(s); one ROC file per value")
        ->required()
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    ident_cmd->add_option("--bins", cfg.bins, "score-histogram bins / ROC grid")
        ->check(CLI::Range(2, 1 << 24))
        ->capture_default_str();
    ident_cmd->add_option("--rows", cfg.rows_range, "heatmap row range begin:end (digit order)");
    ident_cmd->add_option("--cols", cfg.cols_range, "heatmap column range begin:end");
    add_common(ident_cmd);

    CLI::App* self_cmd = app.add_subcommand("selftest", "run built-in invariant suites");
    self_cmd->add_option("--seed", cfg.seed, "property-test RNG seed")->capture_default_str();
    self_cmd->add_flag("--inject-fault", cfg.inject_fault)->group("");  // hidden test fixture
    add_common(self_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (train_cmd->parsed()) return cmd_train(cfg);
        if (eval_cmd->parsed()) return cmd_evaluate(cfg);
        if (ident_cmd->parsed()) return cmd_identify(cfg);
        if (self_cmd->parsed()) return cmd_selftest(cfg);
        std::cerr << "no subcommand\n";
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const ManifestError& e) {
        std::cerr << "manifest error: " << e.what() << "\n";
        return kExitManifest;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const DimensionError& e) {
        std::cerr << "dimension error: " << e.what() << "\n";
        return kExitDims;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::out_of_range& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    }
}
