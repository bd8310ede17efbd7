// hawe: command-line front end. Every subcommand reads and writes plain
// files and leaves a key=value manifest next to its main output.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "hawe/corpus.hpp"
#include "hawe/error.hpp"
#include "hawe/evalharness.hpp"
#include "hawe/hetgraph.hpp"
#include "hawe/pvdm.hpp"
#include "hawe/walklang.hpp"
#include "manifest.hpp"

namespace fs = std::filesystem;

namespace hawe::cli {
namespace {

enum ExitCode { kOk = 0, kUsage = 2, kInput = 3, kRuntime = 4 };

std::string fmt(double x, const char* spec = "%.17g") {
  char buf[48];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

fs::path manifest_path(const std::string& explicit_path, const fs::path& primary) {
  if (!explicit_path.empty()) return explicit_path;
  return fs::path(primary.string() + ".manifest");
}

void ensure_parent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

// ---- shared option groups ---------------------------------------------------

struct CorpusOpts {
  std::uint32_t samples = 1024;
  std::uint32_t walk_length = 6;
  std::string mode = "haw";
  unsigned threads = 1;

  void add(CLI::App& app) {
    app.add_option("--samples,-T", samples, "Walks sampled per node (T)")->check(CLI::PositiveNumber);
    app.add_option("--walk-length,-L", walk_length, "Walk length in edges (L)")
        ->check(CLI::PositiveNumber);
    app.add_option("--mode", mode, "Token form: aw, haw or chaw");
    app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  }
  CorpusConfig config(std::uint64_t seed) const {
    return {samples, walk_length, parse_walk_mode(mode), seed, threads};
  }
};

struct TrainOpts {
  std::uint32_t dim = 128;
  std::uint32_t window = 5;
  std::uint32_t epochs = 100;
  double lr_start = 0.025;
  double lr_end = 0.0001;
  bool deterministic = true;
  bool full_batch = false;

  void add(CLI::App& app) {
    app.add_option("--dim,-d", dim, "Embedding dimension")->check(CLI::PositiveNumber);
    app.add_option("--window", window, "Context half-width")->check(CLI::PositiveNumber);
    app.add_option("--epochs", epochs, "Training epochs")->check(CLI::PositiveNumber);
    app.add_option("--lr-start", lr_start, "Initial learning rate");
    app.add_option("--lr-end", lr_end, "Final learning rate");
    app.add_flag("--deterministic,!--hogwild", deterministic,
                 "Single-threaded bit-reproducible training (default); --hogwild allows "
                 "unsynchronized multi-threaded updates");
    app.add_flag("--full-batch", full_batch, "One exact-gradient ascent step per epoch");
  }
  TrainConfig config(std::uint64_t seed, unsigned threads) const {
    TrainConfig cfg;
    cfg.dim = dim;
    cfg.window = window;
    cfg.epochs = epochs;
    cfg.lr_start = lr_start;
    cfg.lr_end = lr_end;
    cfg.seed = seed;
    cfg.threads = threads;
    cfg.deterministic = deterministic;
    cfg.full_batch = full_batch;
    return cfg;
  }
};

struct EvalOpts {
  double train_frac = 0.7;
  std::uint32_t repeats = 50;

  void add(CLI::App& app) {
    app.add_option("--train-frac", train_frac, "Training fraction per split");
    app.add_option("--repeats", repeats, "Number of random splits")->check(CLI::PositiveNumber);
  }
  ClassifyConfig config(std::uint64_t seed) const {
    ClassifyConfig cfg;
    cfg.train_frac = train_frac;
    cfg.repeats = repeats;
    cfg.seed = seed;
    return cfg;
  }
};

/// Two-column raw_id / label file mapped onto `ids` (unlisted ids get no
/// label). Labels are interned in first-appearance order.
std::vector<std::int32_t> read_labels_for(const fs::path& path,
                                          const std::vector<std::string>& ids) {
  std::ifstream in(path);
  if (!in) throw InputError(path.string() + ": cannot open");
  std::unordered_map<std::string, std::size_t> row_of;
  for (std::size_t i = 0; i < ids.size(); ++i) row_of.emplace(ids[i], i);
  std::map<std::string, std::int32_t> label_ids;
  std::vector<std::int32_t> labels(ids.size(), kNoLabel);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string raw, label, extra;
    if (!(ss >> raw >> label) || (ss >> extra)) {
      throw InputError(path.string() + ":" + std::to_string(lineno) +
                       ": expected two columns raw_id<TAB>label");
    }
    auto it = row_of.find(raw);
    if (it == row_of.end()) continue;
    auto [lit, inserted] =
        label_ids.emplace(label, static_cast<std::int32_t>(label_ids.size()));
    labels[it->second] = lit->second;
  }
  return labels;
}

/// nodes.tsv (+ optional edges.tsv) with labels taken from nodes.tsv's third
/// column or, when given, a separate label file.
HeteroGraph load_labeled_graph(const fs::path& nodes, const fs::path& edges,
                               const std::string& label_file) {
  HeteroGraph graph = load_graph(nodes, edges);
  if (!label_file.empty()) {
    auto [labels, names] = load_label_file(graph, label_file);
    graph.set_labels(std::move(labels), std::move(names));
  }
  return graph;
}

// ---- subcommands ----------------------------------------------------------

struct Command {
  CLI::App* app = nullptr;
  std::function<void()> run;
};

Command add_generate(CLI::App& root) {
  auto* gen = root.add_subcommand("generate", "Write a synthetic graph (nodes.tsv, edges.tsv)");
  gen->require_subcommand(1);
  auto shared = std::make_shared<std::function<void()>>();

  struct Common {
    std::string out = ".";
    std::uint64_t seed = 1;
    std::uint32_t types = 2;
    std::string manifest;
  };
  auto common = std::make_shared<Common>();

  auto finish = [common](CLI::App* sub, const HeteroGraph& graph, const RoleLabeling* roles) {
    const fs::path dir = common->out;
    fs::create_directories(dir);
    write_graph(graph, dir / "nodes.tsv", dir / "edges.tsv");
    Manifest m("generate " + sub->get_name());
    m.add_options(*sub);
    m.set("result.nodes", std::to_string(graph.num_nodes()));
    m.set("result.edges", std::to_string(graph.num_edges()));
    m.set("result.types", std::to_string(graph.num_types()));
    m.add_artifact("nodes", dir / "nodes.tsv");
    m.add_artifact("edges", dir / "edges.tsv");
    if (roles) {
      write_roles(graph, *roles, dir / "roles.tsv");
      m.set("result.roles", std::to_string(roles->num_roles));
      m.add_artifact("roles", dir / "roles.tsv");
    }
    const fs::path mpath = common->manifest.empty() ? dir / "manifest.txt" : fs::path(common->manifest);
    m.write(mpath);
    std::printf("wrote %zu nodes, %zu edges to %s\n", graph.num_nodes(), graph.num_edges(),
                dir.string().c_str());
  };

  auto add_common = [common](CLI::App* sub, bool with_types) {
    sub->add_option("--out,-o", common->out, "Output directory");
    sub->add_option("--seed", common->seed, "Random seed");
    if (with_types) sub->add_option("--types", common->types, "Number of node types")->check(CLI::PositiveNumber);
    sub->add_option("--manifest", common->manifest, "Manifest path (default <out>/manifest.txt)");
  };

  struct Pinwheel {
    std::uint32_t blades = 8;
    std::uint32_t blade_len = 2;
    bool hetero = false;
  };
  auto pw = std::make_shared<Pinwheel>();
  auto* pin = gen->add_subcommand("pinwheel", "Hub ring with pendant blades; labels are WL roles");
  pin->add_option("--blades", pw->blades, "Number of blades (hubs)")->check(CLI::Range(3u, 1u << 20));
  pin->add_option("--blade-len", pw->blade_len, "Nodes per blade")->check(CLI::PositiveNumber);
  pin->add_flag("--hetero", pw->hetero, "Alternate two node types along and across blades");
  add_common(pin, false);
  pin->callback([=] {
    *shared = [=] {
      // Seed 0 is the canonical layout; the CLI seed shuffles ids.
      HeteroGraph g = gen_pinwheel(pw->blades, pw->blade_len, pw->hetero, common->seed);
      const RoleLabeling roles = wl_roles(g);
      std::vector<std::int32_t> labels(roles.roles.begin(), roles.roles.end());
      std::vector<std::string> names;
      for (std::uint32_t r = 0; r < roles.num_roles; ++r) names.push_back("role" + std::to_string(r));
      g.set_labels(std::move(labels), std::move(names));
      finish(pin, g, &roles);
    };
  });

  struct Er {
    std::uint32_t nodes = 1000;
    double p = 0.01;
  };
  auto er = std::make_shared<Er>();
  auto* ers = gen->add_subcommand("er", "Erdos-Renyi G(n, p) with uniform random types");
  ers->add_option("--nodes,-n", er->nodes, "Node count")->required()->check(CLI::PositiveNumber);
  ers->add_option("--p", er->p, "Edge probability")->required()->check(CLI::Range(0.0, 1.0));
  add_common(ers, true);
  ers->callback([=] {
    *shared = [=] { finish(ers, gen_er(er->nodes, er->p, common->types, common->seed), nullptr); };
  });

  struct Ba {
    std::uint32_t nodes = 1000;
    std::uint32_t m = 1;
  };
  auto ba = std::make_shared<Ba>();
  auto* bas = gen->add_subcommand("ba", "Barabasi-Albert preferential attachment");
  bas->add_option("--nodes,-n", ba->nodes, "Node count")->required()->check(CLI::PositiveNumber);
  bas->add_option("--m", ba->m, "Edges added per new node")->check(CLI::PositiveNumber);
  add_common(bas, true);
  bas->callback([=] {
    *shared = [=] { finish(bas, gen_ba(ba->nodes, ba->m, common->types, common->seed), nullptr); };
  });

  return {gen, [shared] { (*shared)(); }};
}

Command add_sample(CLI::App& root) {
  struct Opts {
    std::string nodes, edges, out, tsv, manifest, exact_start, exact_out;
    std::uint64_t seed = 1;
    CorpusOpts corpus;
  };
  auto o = std::make_shared<Opts>();
  auto* app = root.add_subcommand("sample", "Build a walk corpus from a graph");
  app->add_option("--nodes", o->nodes, "nodes.tsv")->required();
  app->add_option("--edges", o->edges, "edges.tsv")->required();
  app->add_option("--out,-o", o->out, "Binary corpus output")->required();
  app->add_option("--seed", o->seed, "Random seed");
  o->corpus.add(*app);
  app->add_option("--tsv", o->tsv, "Also write a readable TSV export");
  app->add_option("--exact-start", o->exact_start,
                  "Raw node id: also dump the exact token distribution from this node");
  app->add_option("--exact-out", o->exact_out, "Path for the exact distribution TSV")
      ->needs(app->get_option("--exact-start"));
  app->add_option("--manifest", o->manifest, "Manifest path (default <out>.manifest)");

  return {app, [o, app] {
            const HeteroGraph graph = load_graph(o->nodes, o->edges);
            const CorpusConfig cfg = o->corpus.config(o->seed);
            auto [corpus, lexicon] = build_corpus(graph, cfg);
            ensure_parent(o->out);
            save_corpus(corpus, lexicon, o->out);

            Manifest m("sample");
            m.add_options(*app);
            m.set("result.nodes_with_context", std::to_string(corpus.num_contexts()));
            m.set("result.isolated_nodes", std::to_string(corpus.isolated.size()));
            m.set("result.lexicon_size", std::to_string(lexicon.size()));
            m.add_artifact("corpus", o->out);
            if (!o->tsv.empty()) {
              export_corpus_tsv(corpus, lexicon, graph.raw_ids(), o->tsv);
              m.add_artifact("corpus_tsv", o->tsv);
            }
            if (!o->exact_start.empty()) {
              const auto start = graph.find(o->exact_start);
              if (!start) throw InputError("unknown node id '" + o->exact_start + "'");
              const auto dist = exact_walk_distribution(graph, *start, cfg.walk_length, cfg.mode);
              const fs::path dpath =
                  o->exact_out.empty() ? fs::path(o->out + ".exact.tsv") : fs::path(o->exact_out);
              write_distribution(dist, dpath);
              m.add_artifact("exact_distribution", dpath);
            }
            m.write(manifest_path(o->manifest, o->out));
            std::printf("corpus: %zu contexts x %u tokens, lexicon %zu, isolated %zu\n",
                        corpus.num_contexts(), corpus.samples, lexicon.size(),
                        corpus.isolated.size());
          }};
}

Command add_train(CLI::App& root) {
  struct Opts {
    std::string corpus, nodes, out, model, manifest;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    TrainOpts train;
  };
  auto o = std::make_shared<Opts>();
  auto* app = root.add_subcommand("train", "Train node embeddings on a corpus");
  app->add_option("--corpus", o->corpus, "Binary corpus from `sample`")->required();
  app->add_option("--nodes", o->nodes, "nodes.tsv providing raw ids (default: node indices)");
  app->add_option("--out,-o", o->out, "Embedding TSV output")->required();
  app->add_option("--model", o->model, "Also save the full binary model");
  app->add_option("--seed", o->seed, "Random seed");
  app->add_option("--threads", o->threads, "Worker threads (used with --hogwild)")
      ->check(CLI::PositiveNumber);
  o->train.add(*app);
  app->add_option("--manifest", o->manifest, "Manifest path (default <out>.manifest)");

  return {app, [o, app] {
            auto [corpus, lexicon] = load_corpus(o->corpus);
            std::vector<std::string> ids;
            if (!o->nodes.empty()) {
              ids = load_node_table(o->nodes).raw_ids;
              if (ids.size() != corpus.num_nodes) {
                throw InputError(o->nodes + ": has " + std::to_string(ids.size()) +
                                 " nodes but the corpus was built on " +
                                 std::to_string(corpus.num_nodes));
              }
            } else {
              for (std::uint32_t v = 0; v < corpus.num_nodes; ++v) ids.push_back(std::to_string(v));
            }
            const TrainConfig cfg = o->train.config(o->seed, o->threads);
            const EmbeddingModel model = train(corpus, lexicon, cfg);
            if (!model.all_finite()) throw std::runtime_error("training diverged (non-finite parameters)");
            ensure_parent(o->out);
            export_embeddings(model, corpus, ids, o->out);

            Manifest m("train");
            m.add_options(*app);
            m.set("result.objective", fmt(objective(model, corpus)));
            m.set("result.lexicon_size", std::to_string(lexicon.size()));
            m.add_artifact("embeddings", o->out);
            if (!o->model.empty()) {
              save_model(model, o->model);
              m.add_artifact("model", o->model);
            }
            m.write(manifest_path(o->manifest, o->out));
            std::printf("trained %zu node vectors (d=%u)\n", corpus.num_contexts(), cfg.dim);
          }};
}

Command add_classify(CLI::App& root) {
  struct Opts {
    std::string embeddings, labels, node_labels, out, summary, manifest;
    std::uint64_t seed = 1;
    EvalOpts eval;
  };
  auto o = std::make_shared<Opts>();
  auto* app = root.add_subcommand("classify", "Role classification over repeated splits");
  app->add_option("--embeddings", o->embeddings, "Embedding TSV from `train`")->required();
  auto* lab = app->add_option("--labels", o->labels, "Two-column raw_id/label file (e.g. roles.tsv)");
  auto* nlab = app->add_option("--node-labels", o->node_labels,
                               "nodes.tsv whose third column holds class labels");
  lab->excludes(nlab);
  app->add_option("--out,-o", o->out, "Report TSV output")->required();
  app->add_option("--summary", o->summary, "Plain-text summary output");
  app->add_option("--seed", o->seed, "Split seed");
  o->eval.add(*app);
  app->add_option("--manifest", o->manifest, "Manifest path (default <out>.manifest)");

  return {app, [o, app] {
            if (o->labels.empty() && o->node_labels.empty()) {
              throw std::invalid_argument("classify needs --labels or --node-labels");
            }
            const EmbeddingTable table = load_embeddings(o->embeddings);
            std::vector<std::int32_t> labels;
            if (!o->labels.empty()) {
              labels = read_labels_for(o->labels, table.ids);
            } else {
              const NodeTable nodes = load_node_table(o->node_labels);
              if (nodes.labels.empty()) throw InputError(o->node_labels + ": no class labels");
              std::unordered_map<std::string, std::int32_t> by_id;
              for (std::size_t i = 0; i < nodes.raw_ids.size(); ++i) by_id[nodes.raw_ids[i]] = nodes.labels[i];
              for (const auto& id : table.ids) {
                auto it = by_id.find(id);
                labels.push_back(it == by_id.end() ? kNoLabel : it->second);
              }
            }
            const EvalReport report = classify(table.values, labels, o->eval.config(o->seed));
            ensure_parent(o->out);
            write_report(report, o->out);
            const std::string text = summarize(report);
            std::fputs(text.c_str(), stdout);

            Manifest m("classify");
            m.add_options(*app);
            m.set("result.mean_accuracy", fmt(report.mean_accuracy));
            m.add_artifact("report", o->out);
            if (!o->summary.empty()) {
              std::ofstream(o->summary) << text;
              m.add_artifact("summary", o->summary);
            }
            m.write(manifest_path(o->manifest, o->out));
          }};
}

Command add_search(CLI::App& root) {
  struct Opts {
    std::string embeddings, target, out, manifest;
    std::size_t k = 5;
  };
  auto o = std::make_shared<Opts>();
  auto* app = root.add_subcommand("search", "Top-k nearest nodes by Euclidean distance");
  app->add_option("--embeddings", o->embeddings, "Embedding TSV from `train`")->required();
  app->add_option("--target", o->target, "Raw id of the query node")->required();
  app->add_option("--k", o->k, "Neighbours to return")->check(CLI::PositiveNumber);
  app->add_option("--out,-o", o->out, "Neighbour TSV output")->required();
  app->add_option("--manifest", o->manifest, "Manifest path (default <out>.manifest)");

  return {app, [o, app] {
            const EmbeddingTable table = load_embeddings(o->embeddings);
            const NeighborList list = topk_search(table, o->target, o->k);
            ensure_parent(o->out);
            write_neighbors(list, o->out);
            for (std::size_t i = 0; i < list.neighbors.size(); ++i) {
              std::printf("%zu\t%s\t%.9g\n", i + 1, list.neighbors[i].id.c_str(),
                          list.neighbors[i].distance);
            }
            Manifest m("search");
            m.add_options(*app);
            m.add_artifact("neighbors", o->out);
            m.write(manifest_path(o->manifest, o->out));
          }};
}

Command add_count(CLI::App& root) {
  struct Opts {
    unsigned length = 3;
    unsigned types = 1;
    std::string out, manifest;
  };
  auto o = std::make_shared<Opts>();
  auto* app = root.add_subcommand("count", "Bell number and HAW counts for a walk length");
  app->add_option("--length,-l", o->length, "Walk length in edges (1..10)")->required();
  app->add_option("--types", o->types, "Number of node types")->check(CLI::PositiveNumber);
  app->add_option("--out,-o", o->out, "Write the table here instead of stdout");
  app->add_option("--manifest", o->manifest, "Manifest path (default <out>.manifest when --out is set)");

  return {app, [o, app] {
            const HawCount c = count_haws(o->length, o->types);
            std::ostringstream table;
            table << "l\tbell\thaw_exact\thaw_product_bound\n"
                  << o->length << '\t' << bell(o->length).str() << '\t' << c.exact.str() << '\t'
                  << c.product_bound.str() << '\n';
            if (o->out.empty()) {
              std::fputs(table.str().c_str(), stdout);
            } else {
              ensure_parent(o->out);
              std::ofstream(o->out) << table.str();
            }
            if (!o->out.empty() || !o->manifest.empty()) {
              Manifest m("count");
              m.add_options(*app);
              m.set("result.bell", bell(o->length).str());
              m.set("result.haw_exact", c.exact.str());
              m.set("result.haw_product_bound", c.product_bound.str());
              if (!o->out.empty()) m.add_artifact("table", o->out);
              m.write(manifest_path(o->manifest, o->out));
            }
          }};
}

std::vector<std::uint32_t> parse_list(const std::string& text) {
  std::vector<std::uint32_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || v == 0 || v > 0xffffffffUL) {
      throw std::invalid_argument("bad list element '" + item + "' (expected positive integers)");
    }
    out.push_back(static_cast<std::uint32_t>(v));
  }
  if (out.empty()) throw std::invalid_argument("empty value list");
  return out;
}

Command add_sweep(CLI::App& root) {
  struct Opts {
    std::string nodes, edges, labels, param, values, out, manifest;
    std::uint64_t seed = 1;
    CorpusOpts corpus;
    TrainOpts train;
    EvalOpts eval;
  };
  auto o = std::make_shared<Opts>();
  auto* app = root.add_subcommand("sweep", "Accuracy as one parameter varies");
  app->add_option("--nodes", o->nodes, "nodes.tsv (third column: class label)")->required();
  app->add_option("--edges", o->edges, "edges.tsv")->required();
  app->add_option("--labels", o->labels, "Two-column raw_id/label file overriding nodes.tsv labels");
  app->add_option("--param", o->param, "Parameter to vary: L, T, d or window")->required();
  app->add_option("--values", o->values, "Comma-separated values, e.g. 64,256,1024")->required();
  app->add_option("--out,-o", o->out, "Sweep TSV output")->required();
  app->add_option("--seed", o->seed, "Seed for sampling, training and splits");
  o->corpus.add(*app);
  o->train.add(*app);
  o->eval.add(*app);
  app->add_option("--manifest", o->manifest, "Manifest path (default <out>.manifest)");

  return {app, [o, app] {
            const SweepParam param = parse_sweep_param(o->param);
            const auto values = parse_list(o->values);
            const HeteroGraph graph = load_labeled_graph(o->nodes, o->edges, o->labels);
            if (!graph.has_labels()) throw InputError("sweep needs class labels");
            PipelineConfig cfg;
            cfg.corpus = o->corpus.config(o->seed);
            cfg.train = o->train.config(o->seed, o->corpus.threads);
            cfg.eval = o->eval.config(o->seed);
            const auto rows = sweep(param, values, cfg, graph, graph.labels());
            ensure_parent(o->out);
            write_sweep(param, rows, o->out);
            for (const auto& r : rows) std::printf("%s=%u\t%.4f\n", o->param.c_str(), r.value, r.mean_accuracy);
            Manifest m("sweep");
            m.add_options(*app);
            m.add_artifact("sweep", o->out);
            m.write(manifest_path(o->manifest, o->out));
          }};
}

Command add_bench(CLI::App& root) {
  struct Opts {
    std::string family = "er", sizes = "1000,10000,100000", out, manifest;
    std::uint64_t seed = 1;
    std::uint32_t runs = 5;
    double degree = 10.0;
    std::uint32_t ba_edges = 1;
    std::uint32_t types = 2;
    CorpusOpts corpus;
    TrainOpts train;
  };
  auto o = std::make_shared<Opts>();
  // Desk-scale defaults; override any of them for larger runs.
  o->corpus.samples = 32;
  o->train.dim = 16;
  o->train.epochs = 2;
  auto* app = root.add_subcommand("bench", "End-to-end runtime (corpus + training) vs graph size");
  app->add_option("--family", o->family, "Graph family: er or ba");
  app->add_option("--sizes", o->sizes, "Ascending comma-separated node counts");
  app->add_option("--runs", o->runs, "Runs averaged per size")->check(CLI::PositiveNumber);
  app->add_option("--degree", o->degree, "ER mean degree (p = degree / n)");
  app->add_option("--ba-edges", o->ba_edges, "BA edges per new node")->check(CLI::PositiveNumber);
  app->add_option("--types", o->types, "Number of node types")->check(CLI::PositiveNumber);
  app->add_option("--seed", o->seed, "Seed for graphs, sampling and training");
  o->corpus.add(*app);
  o->train.add(*app);
  app->add_option("--out,-o", o->out, "Bench TSV output")->required();
  app->add_option("--manifest", o->manifest, "Manifest path (default <out>.manifest)");

  return {app, [o, app] {
            const GraphFamily family = parse_graph_family(o->family);
            const auto sizes = parse_list(o->sizes);
            BenchConfig cfg;
            cfg.corpus = o->corpus.config(o->seed);
            cfg.train = o->train.config(o->seed, o->corpus.threads);
            cfg.runs = o->runs;
            cfg.er_mean_degree = o->degree;
            cfg.ba_edges = o->ba_edges;
            cfg.num_types = o->types;
            cfg.graph_seed = o->seed;
            const auto rows = bench_runtime(sizes, family, cfg);
            ensure_parent(o->out);
            write_bench(rows, o->out);
            std::vector<double> xs, ys;
            for (const auto& r : rows) {
              std::printf("n=%u\tedges=%llu\t%.4fs\n", r.nodes,
                          static_cast<unsigned long long>(r.edges), r.seconds);
              xs.push_back(r.nodes);
              ys.push_back(r.seconds);
            }
            Manifest m("bench");
            m.add_options(*app);
            if (rows.size() >= 2) {
              const double slope = loglog_slope(xs, ys);
              std::printf("log-log slope %.3f\n", slope);
              m.set("result.loglog_slope", fmt(slope, "%.4f"));
            }
            m.add_artifact("bench", o->out);
            m.write(manifest_path(o->manifest, o->out));
          }};
}

Command add_wl_roles(CLI::App& root) {
  struct Opts {
    std::string nodes, edges, out, manifest;
    std::uint32_t max_iters = 64;
  };
  auto o = std::make_shared<Opts>();
  auto* app = root.add_subcommand("wl-roles", "Typed WL colour refinement roles");
  app->add_option("--nodes", o->nodes, "nodes.tsv")->required();
  app->add_option("--edges", o->edges, "edges.tsv")->required();
  app->add_option("--max-iters", o->max_iters, "Refinement rounds cap")->check(CLI::PositiveNumber);
  app->add_option("--out,-o", o->out, "roles.tsv output")->required();
  app->add_option("--manifest", o->manifest, "Manifest path (default <out>.manifest)");

  return {app, [o, app] {
            const HeteroGraph graph = load_graph(o->nodes, o->edges);
            const RoleLabeling roles = wl_roles(graph, o->max_iters);
            ensure_parent(o->out);
            write_roles(graph, roles, o->out);
            std::printf("%u roles over %zu nodes\n", roles.num_roles, graph.num_nodes());
            Manifest m("wl-roles");
            m.add_options(*app);
            m.set("result.roles", std::to_string(roles.num_roles));
            m.add_artifact("roles", o->out);
            m.write(manifest_path(o->manifest, o->out));
          }};
}

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r' || c == '\t') c = ' ';
  }
  return s;
}

int fail(ExitCode code, const char* kind, const std::string& what) {
  std::fprintf(stderr, "hawe: error: kind=%s code=%d message=%s\n", kind, code,
               one_line(what).c_str());
  return code;
}

int run(int argc, char** argv) {
  CLI::App root{"Structural-role embeddings for heterogeneous graphs via anonymous walks", "hawe"};
  root.require_subcommand(1);
  root.set_version_flag("--version", "hawe 0.1.0");

  std::vector<Command> commands;
  commands.push_back(add_generate(root));
  commands.push_back(add_sample(root));
  commands.push_back(add_train(root));
  commands.push_back(add_classify(root));
  commands.push_back(add_search(root));
  commands.push_back(add_count(root));
  commands.push_back(add_sweep(root));
  commands.push_back(add_bench(root));
  commands.push_back(add_wl_roles(root));

  try {
    root.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return root.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kUsage, "usage", e.what());
  }

  try {
    for (auto& cmd : commands) {
      if (cmd.app->parsed()) cmd.run();
    }
  } catch (const InputError& e) {
    return fail(kInput, "input", e.what());
  } catch (const std::invalid_argument& e) {
    return fail(kUsage, "usage", e.what());
  } catch (const std::exception& e) {
    return fail(kRuntime, "runtime", e.what());
  }
  return kOk;
}

}  // namespace
}  // namespace hawe::cli

int main(int argc, char** argv) { return hawe::cli::run(argc, argv); }
