// Command-line front door: stats / eval / diagnose / split / convert-embeddings.

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "seqrec/commands.hpp"

namespace {

using seqrec::RunConfig;

struct FlagOverrides {
    std::string config_file;
    RunConfig flags; // only fields actually set on the command line are applied
};

void add_common_flags(CLI::App* cmd, FlagOverrides& o, RunConfig& cfg) {
    cmd->add_option("--config", o.config_file, "JSON config file (flags override it)");
    cmd->add_option("--interactions", cfg.interactions_path, "interaction file (DSV)");
    cmd->add_option("--embeddings", cfg.embeddings_path, "embedding file (text or SRAE binary)");
    cmd->add_option("--output-dir", cfg.output_dir, "output directory");
    cmd->add_option("--min-len", cfg.min_len, "minimum interactions per user (>= 3)");
    cmd->add_option("--max-len", cfg.max_len, "maximum sequence length (keeps most recent)");
    cmd->add_option("--min-item-count", cfg.min_item_count,
                    "minimum interactions per item (0 = no item filtering)");
    cmd->add_option("--delimiter", cfg.delimiter, "column delimiter (default tab)");
    cmd->add_flag("--has-header", cfg.has_header, "first line is a header");
    cmd->add_option("--user-column", cfg.user_column, "user column (name or index)");
    cmd->add_option("--item-column", cfg.item_column, "item column (name or index)");
    cmd->add_option("--time-column", cfg.time_column, "timestamp column (name or index)");
    cmd->add_flag("--lenient", cfg.lenient_parse, "skip malformed rows instead of aborting");
    cmd->add_flag("--allow-missing-embeddings", cfg.allow_missing_embeddings,
                  "zero-substitute vocabulary items missing from the embedding file");
    cmd->add_option("--model", cfg.models,
                    "models: tgh1 tgh2 semnn idlast idsem count-last external:<file>");
    cmd->add_option("--k", cfg.eval_ks, "evaluation cutoffs");
    cmd->add_option("--k-max", cfg.k_max, "prediction list length");
    cmd->add_option("--overlap-k", cfg.overlap_k, "cutoff for overlap/hop diagnostics");
    cmd->add_option("--seed", cfg.seed, "random seed");
    cmd->add_option("--threads", cfg.threads, "thread count (0 = auto; 1 = fully serial)");
    cmd->add_option("--bpr-dim", cfg.bpr.dim, "BPR latent dimension");
    cmd->add_option("--bpr-lr", cfg.bpr.learning_rate, "BPR learning rate");
    cmd->add_option("--bpr-epochs", cfg.bpr.epochs, "BPR epochs");
    cmd->add_option("--bpr-negatives", cfg.bpr.negatives, "BPR negatives per positive");
    cmd->add_flag("--bpr-popularity-negatives", cfg.bpr.popularity_negatives,
                  "sample negatives by popularity instead of uniformly");
}

// Merge: start from the config file (if any), then re-apply every flag the
// user passed on the command line.
RunConfig merge(const CLI::App* cmd, const FlagOverrides& o, const RunConfig& flag_values) {
    RunConfig cfg;
    if (!o.config_file.empty()) cfg = RunConfig::from_json_file(o.config_file);

    auto used = [&](const std::string& name) { return cmd->count(name) > 0; };
    if (used("--interactions")) cfg.interactions_path = flag_values.interactions_path;
    if (used("--embeddings")) cfg.embeddings_path = flag_values.embeddings_path;
    if (used("--output-dir")) cfg.output_dir = flag_values.output_dir;
    if (used("--min-len")) cfg.min_len = flag_values.min_len;
    if (used("--max-len")) cfg.max_len = flag_values.max_len;
    if (used("--min-item-count")) cfg.min_item_count = flag_values.min_item_count;
    if (used("--delimiter")) cfg.delimiter = flag_values.delimiter;
    if (used("--has-header")) cfg.has_header = flag_values.has_header;
    if (used("--user-column")) cfg.user_column = flag_values.user_column;
    if (used("--item-column")) cfg.item_column = flag_values.item_column;
    if (used("--time-column")) cfg.time_column = flag_values.time_column;
    if (used("--lenient")) cfg.lenient_parse = flag_values.lenient_parse;
    if (used("--allow-missing-embeddings"))
        cfg.allow_missing_embeddings = flag_values.allow_missing_embeddings;
    if (used("--model")) cfg.models = flag_values.models;
    if (used("--k")) cfg.eval_ks = flag_values.eval_ks;
    if (used("--k-max")) cfg.k_max = flag_values.k_max;
    if (used("--overlap-k")) cfg.overlap_k = flag_values.overlap_k;
    if (used("--seed")) cfg.seed = flag_values.seed;
    if (used("--threads")) cfg.threads = flag_values.threads;
    if (used("--bpr-dim")) cfg.bpr.dim = flag_values.bpr.dim;
    if (used("--bpr-lr")) cfg.bpr.learning_rate = flag_values.bpr.learning_rate;
    if (used("--bpr-epochs")) cfg.bpr.epochs = flag_values.bpr.epochs;
    if (used("--bpr-negatives")) cfg.bpr.negatives = flag_values.bpr.negatives;
    if (used("--bpr-popularity-negatives"))
        cfg.bpr.popularity_negatives = flag_values.bpr.popularity_negatives;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sequential-recommendation benchmark audit"};
    app.require_subcommand(1);

    struct Sub {
        CLI::App* cmd;
        FlagOverrides overrides;
        RunConfig flags;
        void (*run)(const RunConfig&);
    };
    std::vector<std::unique_ptr<Sub>> subs;
    auto add = [&](const char* name, const char* desc, void (*fn)(const RunConfig&)) {
        auto sub = std::make_unique<Sub>();
        sub->cmd = app.add_subcommand(name, desc);
        sub->run = fn;
        add_common_flags(sub->cmd, sub->overrides, sub->flags);
        subs.push_back(std::move(sub));
    };
    add("stats", "transition-graph statistics and coverage", &seqrec::cmd_stats);
    add("eval", "run models and report Recall@K / NDCG@K", &seqrec::cmd_eval);
    add("diagnose", "full shortcut audit (stats, probes, overlap, hop buckets)",
        &seqrec::cmd_diagnose);
    add("split", "write the leave-one-out split to disk", &seqrec::cmd_split);

    seqrec::ConvertOptions conv;
    std::string conv_format = "binary";
    auto* convert = app.add_subcommand("convert-embeddings",
                                       "convert embeddings between text and binary");
    convert->add_option("--input", conv.input_path, "input embedding file")->required();
    convert->add_option("--output", conv.output_path, "output embedding file")->required();
    convert->add_option("--to", conv_format, "output format: binary | text")
        ->check(CLI::IsMember({"binary", "text"}));
    convert->add_flag("--normalize", conv.normalize, "L2-normalize rows while converting");
    convert->add_option("--text-delimiter", conv.text_delimiter,
                        "value separator for the text format");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : seqrec::kExitUsage;
    }

    try {
        if (convert->parsed()) {
            conv.to_binary = conv_format == "binary";
            seqrec::cmd_convert_embeddings(conv);
            return seqrec::kExitOk;
        }
        for (auto& sub : subs) {
            if (!sub->cmd->parsed()) continue;
            RunConfig cfg = merge(sub->cmd, sub->overrides, sub->flags);
            sub->run(cfg);
            return seqrec::kExitOk;
        }
        std::cerr << "no subcommand given\n";
        return seqrec::kExitUsage;
    } catch (const seqrec::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return seqrec::kExitUsage;
    } catch (const seqrec::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return seqrec::kExitData;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return seqrec::kExitInternal;
    }
}
