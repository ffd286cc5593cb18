#include "seqrec/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "seqrec/diagnostics.hpp"
#include "seqrec/eval.hpp"

namespace seqrec {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// RunConfig

namespace {

const std::vector<std::string> kKnownKeys = {
    "interactions", "embeddings", "output_dir", "min_len", "max_len", "min_item_count",
    "delimiter", "has_header", "user_column", "item_column", "time_column", "lenient_parse",
    "allow_missing_embeddings", "models", "eval_ks", "k_max", "overlap_k", "seed", "threads",
    "bpr"};

const std::vector<std::string> kKnownBprKeys = {"dim", "learning_rate", "epochs", "negatives",
                                                "popularity_negatives"};

bool is_integer(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(c); });
}

} // namespace

RunConfig RunConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    RunConfig cfg;
    cfg.apply_json(buf.str());
    return cfg;
}

void RunConfig::apply_json(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config root must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
        if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end())
            throw ConfigError("unknown config key '" + key + "'");
    }
    try {
        if (doc.contains("interactions")) interactions_path = doc["interactions"];
        if (doc.contains("embeddings")) embeddings_path = doc["embeddings"];
        if (doc.contains("output_dir")) output_dir = doc["output_dir"];
        if (doc.contains("min_len")) min_len = doc["min_len"];
        if (doc.contains("max_len")) max_len = doc["max_len"];
        if (doc.contains("min_item_count")) min_item_count = doc["min_item_count"];
        if (doc.contains("delimiter")) delimiter = doc["delimiter"];
        if (doc.contains("has_header")) has_header = doc["has_header"];
        if (doc.contains("user_column")) user_column = doc["user_column"].dump();
        if (doc.contains("item_column")) item_column = doc["item_column"].dump();
        if (doc.contains("time_column")) time_column = doc["time_column"].dump();
        if (doc.contains("user_column") && doc["user_column"].is_string())
            user_column = doc["user_column"].get<std::string>();
        if (doc.contains("item_column") && doc["item_column"].is_string())
            item_column = doc["item_column"].get<std::string>();
        if (doc.contains("time_column") && doc["time_column"].is_string())
            time_column = doc["time_column"].get<std::string>();
        if (doc.contains("lenient_parse")) lenient_parse = doc["lenient_parse"];
        if (doc.contains("allow_missing_embeddings"))
            allow_missing_embeddings = doc["allow_missing_embeddings"];
        if (doc.contains("models")) models = doc["models"].get<std::vector<std::string>>();
        if (doc.contains("eval_ks")) eval_ks = doc["eval_ks"].get<std::vector<std::size_t>>();
        if (doc.contains("k_max")) k_max = doc["k_max"];
        if (doc.contains("overlap_k")) overlap_k = doc["overlap_k"];
        if (doc.contains("seed")) seed = doc["seed"];
        if (doc.contains("threads")) threads = doc["threads"];
        if (doc.contains("bpr")) {
            const auto& b = doc["bpr"];
            for (const auto& [key, value] : b.items()) {
                if (std::find(kKnownBprKeys.begin(), kKnownBprKeys.end(), key) ==
                    kKnownBprKeys.end())
                    throw ConfigError("unknown config key 'bpr." + key + "'");
            }
            if (b.contains("dim")) bpr.dim = b["dim"];
            if (b.contains("learning_rate")) bpr.learning_rate = b["learning_rate"];
            if (b.contains("epochs")) bpr.epochs = b["epochs"];
            if (b.contains("negatives")) bpr.negatives = b["negatives"];
            if (b.contains("popularity_negatives"))
                bpr.popularity_negatives = b["popularity_negatives"];
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
}

std::string RunConfig::to_json() const {
    json doc{{"interactions", interactions_path},
             {"embeddings", embeddings_path},
             {"output_dir", output_dir},
             {"min_len", min_len},
             {"max_len", max_len},
             {"min_item_count", min_item_count},
             {"delimiter", delimiter},
             {"has_header", has_header},
             {"user_column", user_column},
             {"item_column", item_column},
             {"time_column", time_column},
             {"lenient_parse", lenient_parse},
             {"allow_missing_embeddings", allow_missing_embeddings},
             {"models", models},
             {"eval_ks", eval_ks},
             {"k_max", k_max},
             {"overlap_k", overlap_k},
             {"seed", seed},
             {"threads", threads},
             {"bpr",
              {{"dim", bpr.dim},
               {"learning_rate", bpr.learning_rate},
               {"epochs", bpr.epochs},
               {"negatives", bpr.negatives},
               {"popularity_negatives", bpr.popularity_negatives}}}};
    return doc.dump(2) + "\n";
}

void RunConfig::validate() const {
    if (interactions_path.empty()) throw ConfigError("no interaction file configured");
    if (min_len < 3) throw ConfigError("min_len must be >= 3");
    if (max_len < min_len) throw ConfigError("max_len must be >= min_len");
    if (delimiter.size() != 1) throw ConfigError("delimiter must be a single character");
    if (models.empty()) throw ConfigError("no models selected");
    if (eval_ks.empty()) throw ConfigError("no evaluation K values");
    for (std::size_t K : eval_ks)
        if (K == 0 || K > k_max)
            throw ConfigError("evaluation K=" + std::to_string(K) +
                              " must be in [1, k_max=" + std::to_string(k_max) + "]");
    for (const auto& m : models) {
        static const std::vector<std::string> known = {"tgh1",  "tgh2",  "semnn",
                                                       "idlast", "idsem", "count-last"};
        if (m.rfind("external:", 0) == 0) {
            if (m.size() == 9) throw ConfigError("external model needs a file path");
            continue;
        }
        if (std::find(known.begin(), known.end(), m) == known.end())
            throw ConfigError("unknown model '" + m + "'");
    }
}

unsigned RunConfig::effective_threads() const {
    if (threads > 0) return threads;
    if (const char* env = std::getenv("SEQREC_AUDIT_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

ColumnSchema RunConfig::column_schema() const {
    ColumnSchema s;
    s.delimiter = delimiter[0];
    s.has_header = has_header;
    s.lenient = lenient_parse;
    auto assign = [&](const std::string& col, std::optional<std::string>& name, int& index) {
        if (is_integer(col)) {
            index = std::stoi(col);
        } else {
            name = col;
        }
    };
    assign(user_column, s.user_name, s.user_col);
    assign(item_column, s.item_name, s.item_col);
    assign(time_column, s.time_name, s.time_col);
    return s;
}

// ---------------------------------------------------------------------------
// Recommender adapters

namespace {

class TghRecommender : public Recommender {
public:
    TghRecommender(TghConfig cfg, const TransitionGraph& g, const EmbeddingMatrix& emb)
        : cfg_(std::move(cfg)), g_(g), emb_(emb) {}
    std::vector<ItemIndex> recommend(std::span<const ItemIndex> context,
                                     std::size_t K) const override {
        TghConfig cfg = cfg_;
        cfg.list_size = K;
        auto list = tgh_recommend(cfg, g_, emb_, context);
        std::vector<ItemIndex> out;
        out.reserve(list.size());
        for (const auto& s : list) out.push_back(s.item);
        return out;
    }

private:
    TghConfig cfg_;
    const TransitionGraph& g_;
    const EmbeddingMatrix& emb_;
};

class SemNnRecommender : public Recommender {
public:
    explicit SemNnRecommender(const EmbeddingMatrix& emb) : emb_(emb) {}
    std::vector<ItemIndex> recommend(std::span<const ItemIndex> context,
                                     std::size_t K) const override {
        auto list = sem_nn_rank(emb_, context.back(), K);
        std::vector<ItemIndex> out;
        for (const auto& s : list) out.push_back(s.item);
        return out;
    }

private:
    const EmbeddingMatrix& emb_;
};

class IdLastRecommender : public Recommender {
public:
    explicit IdLastRecommender(const IdLastModel& m) : m_(m) {}
    std::vector<ItemIndex> recommend(std::span<const ItemIndex> context,
                                     std::size_t K) const override {
        auto list = id_last_rank(m_, context.back(), K);
        std::vector<ItemIndex> out;
        for (const auto& s : list) out.push_back(s.item);
        return out;
    }

private:
    const IdLastModel& m_;
};

class IdSemRecommender : public Recommender {
public:
    IdSemRecommender(const IdLastModel& m, const EmbeddingMatrix& emb) : m_(m), emb_(emb) {}
    std::vector<ItemIndex> recommend(std::span<const ItemIndex> context,
                                     std::size_t K) const override {
        auto list = id_plus_sem_rank(m_, emb_, context.back(), K);
        std::vector<ItemIndex> out;
        for (const auto& s : list) out.push_back(s.item);
        return out;
    }

private:
    const IdLastModel& m_;
    const EmbeddingMatrix& emb_;
};

class CountLastRecommender : public Recommender {
public:
    explicit CountLastRecommender(const TransitionGraph& g) : g_(g) {}
    std::vector<ItemIndex> recommend(std::span<const ItemIndex> context,
                                     std::size_t K) const override {
        auto list = count_last_rank(g_, context.back(), K);
        std::vector<ItemIndex> out;
        for (const auto& s : list) out.push_back(s.item);
        return out;
    }

private:
    const TransitionGraph& g_;
};

// ---------------------------------------------------------------------------
// Shared pipeline pieces

struct Pipeline {
    SplitDataset split;
    TransitionGraph graph;
    EmbeddingMatrix emb;
    bool has_embeddings = false;
    std::uint64_t dataset_hash = 0;
};

std::uint64_t fnv1a_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return 0;
    std::uint64_t h = 0xcbf29ce484222325ull;
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        std::streamsize n = in.gcount();
        for (std::streamsize i = 0; i < n; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ull;
        }
        if (!in) break;
    }
    return h;
}

bool needs_embeddings(const std::vector<std::string>& models) {
    for (const auto& m : models)
        if (m == "tgh1" || m == "tgh2" || m == "semnn" || m == "idsem") return true;
    return false;
}

Pipeline load_pipeline(const RunConfig& cfg, bool want_embeddings) {
    Pipeline p;
    auto log = load_interactions(cfg.interactions_path, cfg.column_schema());
    BuildOptions opts;
    opts.min_len = cfg.min_len;
    opts.max_len = cfg.max_len;
    opts.min_item_count = cfg.min_item_count;
    auto ds = build_sequences(log, opts);
    p.split = split_leave_one_out(ds);
    p.graph = TransitionGraph::build(p.split);
    p.dataset_hash = fnv1a_file(cfg.interactions_path);
    if (want_embeddings) {
        if (cfg.embeddings_path.empty())
            throw ConfigError("the selected models require an embedding file");
        EmbeddingLoadOptions eopts;
        eopts.allow_missing = cfg.allow_missing_embeddings;
        EmbeddingLoadReport report;
        p.emb = load_embeddings(cfg.embeddings_path, p.split.item_vocab, eopts, &report);
        normalize_rows(p.emb);
        p.has_embeddings = true;
        if (report.ignored_items > 0)
            std::cerr << "note: " << report.ignored_items
                      << " embedding rows not in the vocabulary were ignored\n";
        if (report.missing_items > 0)
            std::cerr << "note: " << report.missing_items
                      << " vocabulary items missing from the embedding file were "
                         "zero-substituted\n";
    }
    return p;
}

void echo_config(const RunConfig& cfg) {
    fs::create_directories(cfg.output_dir);
    std::ofstream out(fs::path(cfg.output_dir) / "config.json");
    if (!out) throw DataError("cannot write config echo under " + cfg.output_dir);
    out << cfg.to_json();
}

json stats_to_json(const GraphStats& s) {
    json cov = json::object();
    for (const auto& [k, v] : s.coverage) cov["cov@" + std::to_string(k)] = v;
    return json{{"num_users", s.num_users},
                {"num_items", s.num_items},
                {"num_edges", s.num_edges},
                {"avg_seq_len", s.avg_seq_len},
                {"avg_out_degree", s.avg_out_degree},
                {"avg_edge_weight", s.avg_edge_weight},
                {"coverage_pct", cov},
                {"notes",
                 {{"avg_out_degree", "denominator is sources with >=1 outgoing edge"},
                  {"avg_edge_weight", "mean raw transition count per edge"}}}};
}

std::string stats_to_text(const GraphStats& s) {
    std::ostringstream os;
    os << "users            " << s.num_users << '\n'
       << "items            " << s.num_items << '\n'
       << "edges            " << s.num_edges << '\n'
       << "avg seq len      " << s.avg_seq_len << '\n'
       << "avg out-degree   " << s.avg_out_degree << "   (sources with >=1 outgoing edge)\n"
       << "avg edge weight  " << s.avg_edge_weight << "   (mean raw transition count)\n";
    for (const auto& [k, v] : s.coverage)
        os << "cov@" << k << "             " << format_percent(v / 100.0) << "%\n";
    return os.str();
}

std::string model_file_tag(const std::string& model) {
    std::string tag = model;
    for (char& c : tag)
        if (c == ':' || c == '/' || c == '\\' || c == '.') c = '_';
    return tag;
}

// Runs every selected model and returns one PredictionSet per model.
std::vector<PredictionSet> run_selected_models(const RunConfig& cfg, const Pipeline& p) {
    std::vector<PredictionSet> preds;
    unsigned threads = cfg.effective_threads();

    // The BPR model is shared between idlast and idsem.
    std::optional<IdLastModel> id_model;
    auto ensure_id_model = [&]() -> const IdLastModel& {
        if (!id_model) {
            BprHyperparams hp = cfg.bpr;
            hp.seed = cfg.seed;
            id_model = train_id_last(p.split, hp);
        }
        return *id_model;
    };

    for (const auto& name : cfg.models) {
        auto started = std::chrono::steady_clock::now();
        PredictionSet ps;
        if (name.rfind("external:", 0) == 0) {
            ps = read_predictions(name.substr(9), p.split, name);
        } else {
            std::unique_ptr<Recommender> rec;
            if (name == "tgh1" || name == "tgh2")
                rec = std::make_unique<TghRecommender>(TghConfig::preset(name), p.graph, p.emb);
            else if (name == "semnn")
                rec = std::make_unique<SemNnRecommender>(p.emb);
            else if (name == "idlast")
                rec = std::make_unique<IdLastRecommender>(ensure_id_model());
            else if (name == "idsem")
                rec = std::make_unique<IdSemRecommender>(ensure_id_model(), p.emb);
            else if (name == "count-last")
                rec = std::make_unique<CountLastRecommender>(p.graph);
            else
                throw ConfigError("unknown model '" + name + "'");
            ps = run_model(*rec, p.split, cfg.k_max, name, threads);
        }
        auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
                           .count();
        std::cerr << name << ": " << p.split.users.size() << " users in " << elapsed << " s ("
                  << (elapsed > 0 ? static_cast<double>(p.split.users.size()) / elapsed : 0)
                  << " users/s)\n";
        preds.push_back(std::move(ps));
    }
    return preds;
}

} // namespace

// ---------------------------------------------------------------------------
// Subcommands

void cmd_stats(const RunConfig& cfg) {
    RunConfig c = cfg;
    c.models = {"count-last"}; // stats never needs embeddings
    c.validate();
    auto p = load_pipeline(c, /*want_embeddings=*/false);
    auto stats = graph_stats(p.graph, p.split);
    echo_config(cfg);
    std::ofstream js(fs::path(cfg.output_dir) / "stats.json");
    if (!js) throw DataError("cannot write stats.json under " + cfg.output_dir);
    js << stats_to_json(stats).dump(2) << "\n";
    std::ofstream txt(fs::path(cfg.output_dir) / "stats.txt");
    txt << stats_to_text(stats);
    p.graph.save((fs::path(cfg.output_dir) / "graph.srtg").string());
    std::cout << stats_to_text(stats);
}

void cmd_eval(const RunConfig& cfg) {
    cfg.validate();
    auto p = load_pipeline(cfg, needs_embeddings(cfg.models));
    auto preds = run_selected_models(cfg, p);
    auto table = evaluate(preds, p.split, cfg.eval_ks);
    echo_config(cfg);
    for (const auto& ps : preds)
        write_predictions(ps, p.split,
                          (fs::path(cfg.output_dir) /
                           ("predictions_" + model_file_tag(ps.model_name) + ".txt"))
                              .string());
    emit_report(table, (fs::path(cfg.output_dir) / "metrics.json").string(),
                (fs::path(cfg.output_dir) / "metrics.txt").string());
    std::cout << metrics_to_text(table);
}

namespace {

json overlap_to_json(const OverlapMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.models.size(); ++i) {
        json row = json::object();
        for (std::size_t j = 0; j < m.models.size(); ++j) row[m.models[j]] = m.values[i][j];
        rows.push_back(json{{"model", m.models[i]}, {"jaccard", row}});
    }
    return rows;
}

json hop_report_to_json(const HopBucketReport& rep) {
    json buckets = json::array();
    for (std::size_t b = 0; b < rep.labels.size(); ++b) {
        json per_model = json::object();
        for (std::size_t m = 0; m < rep.models.size(); ++m)
            per_model[rep.models[m]] = rep.recall[b][m];
        buckets.push_back(json{{"hop", rep.labels[b]},
                               {"num_users", rep.user_counts[b]},
                               {"recall", per_model}});
    }
    return buckets;
}

double metric_of(const MetricsTable& t, const std::string& model, std::size_t K, bool ndcg) {
    for (const auto& r : t.rows)
        if (r.model == model && r.K == K) return ndcg ? r.ndcg : r.recall;
    return 0.0;
}

std::string audit_markdown(const GraphStats& s, const MetricsTable& table,
                           const OverlapMatrix& overlap, const HopBucketReport& hops,
                           std::size_t overlap_k) {
    std::ostringstream os;
    os << "# Dataset audit\n\n## Transition-graph statistics\n\n"
       << "| #Users | #Items | #Edges | Avg. Seq. Len. | Avg. Out-Deg. | Avg. Edge W. |";
    for (const auto& [k, v] : s.coverage) os << " Cov@" << k << " |";
    os << "\n|---|---|---|---|---|---|";
    for (std::size_t i = 0; i < s.coverage.size(); ++i) os << "---|";
    os << "\n| " << s.num_users << " | " << s.num_items << " | " << s.num_edges << " | "
       << format_percent(s.avg_seq_len / 100.0) << " | " << format_percent(s.avg_out_degree / 100.0)
       << " | " << format_percent(s.avg_edge_weight / 100.0) << " |";
    for (const auto& [k, v] : s.coverage) os << " " << format_percent(v / 100.0) << "% |";
    os << "\n\n(Avg. Out-Deg. divides edges by sources with outgoing edges; Avg. Edge W. is the"
          " mean raw transition count per edge.)\n";

    os << "\n## Model metrics\n\n| Model | K | Recall@K (%) | NDCG@K (%) |\n|---|---|---|---|\n";
    for (const auto& r : table.rows)
        os << "| " << r.model << " | " << r.K << " | " << format_percent(r.recall) << " | "
           << format_percent(r.ndcg) << " |\n";

    os << "\n## Correct-prediction overlap (Jaccard @" << overlap_k << ")\n\n| |";
    for (const auto& m : overlap.models) os << " " << m << " |";
    os << "\n|---|";
    for (std::size_t i = 0; i < overlap.models.size(); ++i) os << "---|";
    os << "\n";
    for (std::size_t i = 0; i < overlap.models.size(); ++i) {
        os << "| " << overlap.models[i] << " |";
        for (std::size_t j = 0; j < overlap.models.size(); ++j)
            os << " " << format_percent(overlap.values[i][j]) << " |";
        os << "\n";
    }

    os << "\n## Recall by hop distance (@" << overlap_k << ")\n\n| Hop | Users |";
    for (const auto& m : hops.models) os << " " << m << " |";
    os << "\n|---|---|";
    for (std::size_t i = 0; i < hops.models.size(); ++i) os << "---|";
    os << "\n";
    for (std::size_t b = 0; b < hops.labels.size(); ++b) {
        os << "| " << hops.labels[b] << " | " << hops.user_counts[b] << " |";
        for (std::size_t m = 0; m < hops.models.size(); ++m)
            os << " " << format_percent(hops.recall[b][m]) << " |";
        os << "\n";
    }
    return os.str();
}

} // namespace

void cmd_diagnose(const RunConfig& cfg) {
    RunConfig c = cfg;
    // The audit always runs the probe suite; external prediction files from
    // the config are audited alongside.
    std::vector<std::string> probe = {"tgh1", "tgh2", "semnn", "idlast", "idsem"};
    for (const auto& m : cfg.models)
        if (m.rfind("external:", 0) == 0) probe.push_back(m);
    c.models = probe;
    c.validate();

    auto p = load_pipeline(c, /*want_embeddings=*/true);
    auto stats = graph_stats(p.graph, p.split);
    auto preds = run_selected_models(c, p);
    auto table = evaluate(preds, p.split, c.eval_ks);
    auto overlap = prediction_overlap(preds, p.split, c.overlap_k);
    auto hops = recall_by_hop(p.graph, preds, p.split, c.overlap_k);

    bool has_external = preds.size() > 5;
    json shortcut_axes{
        {"low_branching",
         {{"avg_out_degree", stats.avg_out_degree},
          {"coverage_pct", stats_to_json(stats)["coverage_pct"]}}},
        {"feature_smoothness",
         {{"semnn_recall_at_k", metric_of(table, "semnn", c.overlap_k, false)},
          {"semnn_ndcg_at_k", metric_of(table, "semnn", c.overlap_k, true)}}},
        {"short_history",
         {{"tgh1_recall_at_k", metric_of(table, "tgh1", c.overlap_k, false)},
          {"tgh2_recall_at_k", metric_of(table, "tgh2", c.overlap_k, false)},
          {"external_models_present", has_external},
          {"note",
           "full-history probes require externally trained models; this axis compares "
           "TGH-1 vs TGH-2 and any supplied external prediction files"}}}};

    auto now = std::chrono::system_clock::now();
    json audit{{"graph_stats", stats_to_json(stats)},
               {"metrics", json::parse(metrics_to_json(table))["metrics"]},
               {"overlap", {{"k", c.overlap_k}, {"jaccard", overlap_to_json(overlap)}}},
               {"recall_by_hop", {{"k", c.overlap_k}, {"buckets", hop_report_to_json(hops)}}},
               {"shortcut_axes", shortcut_axes},
               {"provenance",
                {{"dataset_hash",
                  (std::ostringstream{} << std::hex << p.dataset_hash).str()},
                 {"config", json::parse(c.to_json())},
                 {"generated_at",
                  std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch())
                      .count()}}}};

    echo_config(cfg);
    for (const auto& ps : preds)
        write_predictions(ps, p.split,
                          (fs::path(cfg.output_dir) /
                           ("predictions_" + model_file_tag(ps.model_name) + ".txt"))
                              .string());
    std::ofstream js(fs::path(cfg.output_dir) / "audit.json");
    if (!js) throw DataError("cannot write audit.json under " + cfg.output_dir);
    js << audit.dump(2) << "\n";
    std::ofstream md(fs::path(cfg.output_dir) / "audit.md");
    md << audit_markdown(stats, table, overlap, hops, c.overlap_k);
    std::cout << metrics_to_text(table);
}

void cmd_split(const RunConfig& cfg) {
    RunConfig c = cfg;
    c.models = {"count-last"};
    c.validate();
    auto p = load_pipeline(c, /*want_embeddings=*/false);
    echo_config(cfg);
    write_split(p.split, cfg.output_dir);
    std::cout << "wrote split for " << p.split.users.size() << " users to " << cfg.output_dir
              << "\n";
}

void cmd_convert_embeddings(const ConvertOptions& opts) {
    auto raw = load_embeddings_raw(opts.input_path, opts.text_delimiter);
    if (opts.normalize) normalize_rows(raw.matrix);
    save_embeddings_raw(opts.output_path, raw, opts.to_binary, opts.text_delimiter);
    std::cout << "converted " << raw.ids.size() << " items (dim " << raw.matrix.dim << ") to "
              << opts.output_path << "\n";
}

} // namespace seqrec
