#include "parrot/cli.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "parrot/error.hpp"
#include "parrot/json_io.hpp"
#include "parrot/limits.hpp"
#include "parrot/metrics.hpp"
#include "parrot/projection.hpp"
#include "parrot/service.hpp"
#include "parrot/sqlite_repository.hpp"
#include "parrot/translation.hpp"
#include "parrot/validation.hpp"

namespace fs = std::filesystem;

namespace parrot {

namespace {

struct Globals {
  std::string dataDir;
  bool json = false;
};

std::unique_ptr<SqliteRepository> open_store(const Globals& g) {
  fs::create_directories(g.dataDir);
  return std::make_unique<SqliteRepository>(fs::path(g.dataDir) / "store.db");
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

RuleSet load_rules(const std::string& path) { return path.empty() ? RuleSet::defaults() : RuleSet::load(path); }

// ---- ingest ----

struct FileResult {
  std::string path;
  bool ok = false;
  DocumentId id;
  IngestStats stats;
  std::string code;
  std::string message;
};

std::vector<fs::path> expand_paths(const std::vector<std::string>& inputs, bool formatGiven,
                                   std::vector<FileResult>& missing) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    const fs::path p(in);
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::recursive_directory_iterator(p, fs::directory_options::skip_permission_denied, ec)) {
        if (!e.is_regular_file()) continue;
        if (formatGiven || detect_mime(e.path())) found.push_back(e.path());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else if (fs::exists(p, ec)) {
      files.push_back(p);
    } else {
      missing.push_back({p.generic_string(), false, {}, {}, "not_found", "no such file or directory"});
    }
  }
  return files;
}

int cmd_ingest(const Globals& g, const std::vector<std::string>& inputs, const std::string& source,
               const std::string& lang, const std::string& format, int jobs,
               const std::vector<std::string>& excludes, std::ostream& out) {
  std::optional<std::string> mime;
  if (format == "txt") mime = std::string(kMimePlain);
  else if (format == "html") mime = std::string(kMimeHtml);
  HtmlOptions html;
  for (const auto& e : excludes) html.exclude.push_back(ElementSelector::parse(e));

  std::vector<FileResult> results;
  const auto files = expand_paths(inputs, mime.has_value(), results);
  auto repo = open_store(g);
  const SentenceTokenizer tokenizer;
  const auto base = results.size();
  results.resize(base + files.size());

#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs)
  for (std::size_t i = 0; i < files.size(); ++i) {
    auto& r = results[base + i];
    r.path = files[i].lexically_normal().generic_string();
    try {
      const auto raw = read_raw_file(files[i], mime);
      DocumentMeta meta{source, r.path, raw.mimeType, lang};
      auto prepared = prepare_document(std::move(meta), extract(raw, html), tokenizer);
      std::tie(r.id, r.stats) = repo->commit_document(prepared);
      r.ok = true;
    } catch (const Error& e) {
      r.code = to_string(e.code());
      r.message = e.what();
    } catch (const std::exception& e) {
      r.code = "internal";
      r.message = e.what();
    }
  }

  // concurrent commits can race on a new sentence
  const std::uint64_t merged = jobs > 1 ? repo->dedup_pass(std::nullopt) : 0;

  IngestStats total;
  std::size_t ok = 0;
  json files_json = json::array();
  for (const auto& r : results) {
    if (r.ok) {
      ++ok;
      total += r.stats;
    }
    if (g.json) {
      json f{{"path", r.path}, {"ok", r.ok}};
      if (r.ok) {
        f["documentId"] = r.id;
        f["ingestStats"] = r.stats;
      } else {
        f["error"] = error_json(r.code, r.message);
      }
      files_json.push_back(std::move(f));
    } else if (r.ok) {
      out << "ok\t" << r.path << "\tdocument=" << r.id.value << "\tsentences=" << r.stats.sentences
          << "\tnew=" << r.stats.newDistinct << "\treused=" << r.stats.reusedDistinct << '\n';
    } else {
      out << "error\t" << r.path << '\t' << r.code << '\t' << r.message << '\n';
    }
  }
  const auto failed = results.size() - ok;
  if (g.json) {
    out << json{{"files", files_json}, {"ok", ok}, {"failed", failed}, {"ingestStats", total}, {"duplicatesMerged", merged}}.dump(2) << '\n';
  } else {
    out << "total\tfiles=" << results.size() << "\tok=" << ok << "\tfailed=" << failed
        << "\tsentences=" << total.sentences << "\tnew=" << total.newDistinct << "\treused=" << total.reusedDistinct
        << "\tmerged=" << merged << '\n';
  }
  return failed ? kExitPartial : kExitOk;
}

// ---- limits ----

int cmd_limits(const Globals& g, std::optional<std::uint64_t> vocab, std::optional<unsigned> words, bool table,
               std::optional<unsigned> digitsOpt, const std::string& wordListFile, std::ostream& out) {
  // the word-list table follows the 3-digit style of published tables
  const unsigned digits = digitsOpt.value_or(table ? 3 : 5);
  if (table) {
    const auto lists = wordListFile.empty() ? default_word_lists() : load_word_lists(wordListFile);
    std::vector<unsigned> lengths{kAdvisedSentenceWords, kIncomprehensibleSentenceWords};
    if (words && std::find(lengths.begin(), lengths.end(), *words) == lengths.end()) lengths.push_back(*words);
    const auto rows = ceiling_table(lists, lengths);
    if (g.json) {
      json j = json::array();
      for (const auto& row : rows) j.push_back({{"wordList", row.list}, {"ceilings", row.ceilings}});
      out << json{{"lengths", lengths}, {"rows", j}}.dump(2) << '\n';
    } else {
      out << render_ceiling_table(rows, lengths, digits);
    }
    return kExitOk;
  }
  if (!vocab) throw CLI::RequiredError("--vocab");
  const auto c = sentence_ceiling(*vocab, words.value_or(kAdvisedSentenceWords));
  if (g.json) {
    out << json(c).dump(2) << '\n';
    return kExitOk;
  }
  out << "sum of V^n, n=1.." << c.maxWords << " for V=" << c.vocabularySize << '\n';
  out << "  exact:    " << format_scientific(c.exact, digits) << "  (" << c.digits << " digits)\n";
  out << "  dominant: " << format_scientific(c.dominantTerm, digits) << "  (" << c.vocabularySize << '^'
      << c.maxWords << ")\n";
  return kExitOk;
}

// ---- project ----

int cmd_project(const Globals& g, const std::string& pointsFile, const std::string& planFile, bool validOnly,
                const std::string& rulesFile, std::vector<double> targets, std::optional<double> at,
                std::ostream& out) {
  if (pointsFile.empty() == planFile.empty()) {
    throw CLI::ValidationError("project", "exactly one of --points or --snapshots is required");
  }
  std::vector<TrendPoint> points;
  std::vector<std::string> warnings;
  std::vector<CorpusMetrics> snapshots;
  if (!pointsFile.empty()) {
    points = load_trend_points(pointsFile);
  } else {
    std::ifstream in(planFile);
    if (!in) throw Error(ErrorCode::not_found, "cannot open snapshot plan " + planFile);
    auto repo = open_store(g);
    const auto groups = resolve_snapshot_plan(*repo, parse_snapshot_plan(in));
    const auto rules = load_rules(rulesFile);
    MetricsOptions opt;
    opt.validOnly = validOnly;
    opt.rules = &rules;
    auto series = snapshot_series(*repo, groups, opt);
    points = std::move(series.points);
    warnings = std::move(series.warnings);
    snapshots = std::move(series.metrics);
  }
  const auto trend = fit_log_trend(points);
  if (targets.empty()) targets.assign(std::begin(kDefaultProjectionTargets), std::end(kDefaultProjectionTargets));
  std::vector<VolumeProjection> volumes;
  for (double t : targets) volumes.push_back(required_volume(trend, t));
  const auto alternatives = compare_curve_families(points);
  std::optional<Prediction> prediction;
  if (at) prediction = predict(trend, *at);

  if (g.json) {
    json j{{"points", points},          {"trend", trend},         {"projections", volumes},
           {"alternatives", alternatives}, {"warnings", warnings}, {"validOnly", validOnly}};
    if (!snapshots.empty()) j["snapshots"] = snapshots;
    if (prediction) {
      j["prediction"] = {{"textCharacters", *at},
                         {"repetitionPct", prediction->repetitionPct},
                         {"extrapolated", prediction->extrapolated}};
    }
    out << j.dump(2) << '\n';
    return kExitOk;
  }
  char buf[256];
  for (const auto& w : warnings) out << "warning: " << w << '\n';
  std::snprintf(buf, sizeof buf, "y = %.5f*ln(x) %+.5f   R^2 = %.5f   points = %zu   x in [%.4g, %.4g]\n", trend.a,
                trend.b, trend.r2, trend.pointCount, trend.minX, trend.maxX);
  out << buf;
  out << (validOnly ? "%d.v.sentences with repetitions" : "%d.sentences with repetitions") << "\t#text characters\n";
  for (const auto& v : volumes) {
    std::snprintf(buf, sizeof buf, "%.2f%%\t%s%s\n", v.targetPct, v.textCharacters.to_string().c_str(),
                  v.extrapolated ? "\textrapolated" : "");
    out << buf;
  }
  if (prediction) {
    std::snprintf(buf, sizeof buf, "predicted at x=%.0f: %.2f%%%s\n", *at, prediction->repetitionPct,
                  prediction->extrapolated ? " (extrapolated)" : "");
    out << buf;
  }
  if (std::any_of(volumes.begin(), volumes.end(), [](const auto& v) { return v.extrapolated; })) {
    out << "warning: targets outside the fitted range are extrapolations\n";
  }
  out << "curve families by R^2:";
  for (const auto& a : alternatives) {
    std::snprintf(buf, sizeof buf, " %s=%.5f", a.family.c_str(), a.r2);
    out << buf;
  }
  out << '\n';
  return kExitOk;
}

// ---- validate ----

int cmd_validate(const Globals& g, std::size_t sample, const std::string& rulesFile, std::uint64_t seed,
                 const std::string& source, std::ostream& out) {
  auto repo = open_store(g);
  const auto rules = load_rules(rulesFile);
  Scope scope = AllDocuments{};
  if (!source.empty()) {
    if (!repo->has_source(source)) throw Error(ErrorCode::not_found, "unknown source '" + source + "'");
    scope = SourceScope{source};
  }
  const auto aggregate = validate_corpus(*repo, scope, rules);
  auto ids = kernels::parallel::distinct_ids(repo->scope_data(scope).occurrences);
  std::mt19937_64 rng(seed);
  std::vector<SentenceId> picked;
  std::sample(ids.begin(), ids.end(), std::back_inserter(picked), sample, rng);
  const auto sentences = repo->sentences_by_id(picked);
  json reports = json::array();
  for (const auto& s : sentences) {
    const auto r = validate_sentence(s.plainText, rules);
    if (g.json) {
      reports.push_back({{"sentence", s}, {"report", r}});
    } else {
      out << (r.valid ? "valid\t" : "invalid\t") << s.id.value << '\t';
      for (std::size_t i = 0; i < r.failedRuleIds.size(); ++i) out << (i ? "," : "") << r.failedRuleIds[i];
      out << '\t' << s.plainText << '\n';
    }
  }
  if (g.json) {
    out << json{{"samples", reports}, {"aggregate", aggregate}}.dump(2) << '\n';
  } else {
    out << "distinct checked " << aggregate.distinctChecked << ", valid " << aggregate.distinctValid << " ("
        << format_percent(aggregate.validPct) << "), rules " << aggregate.ruleSetVersion << '\n';
  }
  return kExitOk;
}

}  // namespace

std::vector<SnapshotGroup> parse_snapshot_plan(std::istream& in) {
  std::vector<SnapshotGroup> plan;
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorCode::validation_failed, "snapshot plan line " + std::to_string(lineNo) + ": expected label<TAB>prefixes");
    }
    SnapshotGroup grp{trim(line.substr(0, tab)), {}};
    for (auto& p : split_commas(line.substr(tab + 1))) {
      p = trim(p);
      if (!p.empty()) grp.prefixes.push_back(p);
    }
    plan.push_back(std::move(grp));
  }
  return plan;
}

std::vector<std::vector<DocumentId>> resolve_snapshot_plan(const Repository& repo,
                                                           const std::vector<SnapshotGroup>& plan) {
  std::vector<std::vector<DocumentId>> groups(plan.size());
  PageRequest req{1, kMaxPageSize};
  while (true) {
    const auto page = repo.list_documents({}, req);
    for (const auto& d : page.items) {
      for (std::size_t k = 0; k < plan.size(); ++k) {
        const auto& prefixes = plan[k].prefixes;
        if (std::any_of(prefixes.begin(), prefixes.end(), [&](const auto& p) { return d.name.rfind(p, 0) == 0; })) {
          groups[k].push_back(d.id);
          break;
        }
      }
    }
    if (req.page * req.pageSize >= page.total) break;
    ++req.page;
  }
  return groups;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sentence repetition store and measurement tool", "parrot"};
  app.require_subcommand(1);
  Globals g;
  const char* env = std::getenv(kDataDirEnv);
  g.dataDir = env && *env ? env : "parrot-data";
  app.add_option("--data", g.dataDir, "Data directory (default $" + std::string(kDataDirEnv) + ")");
  app.add_flag("--json", g.json, "Machine-readable output");

  auto* ingest = app.add_subcommand("ingest", "Ingest files or directories");
  std::vector<std::string> paths, excludes;
  std::string source, lang = "en", format;
  int jobs = 1;
  ingest->add_option("paths", paths, "Files or directories")->required();
  ingest->add_option("--source", source, "Source tag")->required();
  ingest->add_option("--lang", lang, "Language tag");
  ingest->add_option("--format", format, "Force format")->check(CLI::IsMember({"txt", "html"}));
  ingest->add_option("--jobs", jobs, "Worker count")->check(CLI::PositiveNumber);
  ingest->add_option("--exclude", excludes, "HTML selector to drop (repeatable)");

  auto* dedup = app.add_subcommand("dedup", "Merge duplicate sentences");
  std::string dedupLang;
  dedup->add_option("--lang", dedupLang, "Restrict to one language");

  auto* metrics = app.add_subcommand("metrics", "Sentence repetition metrics");
  std::vector<std::string> metricSources;
  bool validOnly = false;
  std::string rulesFile;
  metrics->add_option("--source", metricSources, "Source tag (repeatable; default all)");
  metrics->add_flag("--valid-only", validOnly, "Count valid sentences only");
  metrics->add_option("--rules", rulesFile, "Rule set JSON");

  auto* common = app.add_subcommand("common", "Common distinct sentences between sources");
  std::string commonSources;
  common->add_option("--sources", commonSources, "A,B[,C...]")->required();

  auto* limits = app.add_subcommand("limits", "Sentence-count ceilings");
  std::optional<std::uint64_t> vocab;
  std::optional<unsigned> maxWords;
  bool table = false;
  std::optional<unsigned> digits;
  std::string wordLists;
  limits->add_option("--vocab", vocab, "Vocabulary size")->check(CLI::PositiveNumber);
  limits->add_option("--max-words", maxWords, "Maximum sentence length")->check(CLI::Range(1u, 100000u));
  limits->add_flag("--table", table, "Word-list table");
  limits->add_option("--digits", digits, "Significant digits")->check(CLI::Range(1u, 50u));
  limits->add_option("--word-lists", wordLists, "Word list TSV");

  auto* project = app.add_subcommand("project", "Logarithmic trend fit and projections");
  std::string pointsFile, planFile;
  std::vector<double> targets;
  std::optional<double> at;
  bool projValid = false;
  std::string projRules;
  project->add_option("--points", pointsFile, "TSV of x<TAB>y");
  project->add_option("--snapshots", planFile, "Snapshot plan");
  project->add_flag("--valid-only", projValid, "Valid sentences only (snapshots)");
  project->add_option("--rules", projRules, "Rule set JSON");
  project->add_option("--target-pct", targets, "Target percentage (repeatable)");
  project->add_option("--at", at, "Also predict y at this x");

  auto* validate = app.add_subcommand("validate", "Sampled sentence validation");
  std::size_t sample = 20;
  std::uint64_t seed = 1;
  std::string valRules, valSource;
  validate->add_option("--sample", sample, "Sample size");
  validate->add_option("--rules", valRules, "Rule set JSON");
  validate->add_option("--seed", seed, "Sampling seed");
  validate->add_option("--source", valSource, "Source tag");

  auto* audit = app.add_subcommand("audit", "Referential and hash integrity report");

  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  int port = 8080;
  std::string host = "127.0.0.1", pairs;
  std::uint64_t maxUploadMb = 50;
  serve->add_option("--port", port, "Port")->check(CLI::Range(0, 65535));
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--pairs", pairs, "Language pairs, e.g. en:pt,pt:en");
  serve->add_option("--max-upload-mb", maxUploadMb, "Upload cap in MB");
  serve->add_option("--rules", rulesFile, "Rule set JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error\tusage\t" << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*ingest) return cmd_ingest(g, paths, source, lang, format, jobs, excludes, out);
    if (*dedup) {
      auto repo = open_store(g);
      const auto merged = repo->dedup_pass(dedupLang.empty() ? std::nullopt : std::optional(dedupLang));
      if (g.json) out << json{{"merged", merged}}.dump() << '\n';
      else out << "merged " << merged << '\n';
      return kExitOk;
    }
    if (*metrics) {
      auto repo = open_store(g);
      const auto rules = load_rules(rulesFile);
      MetricsOptions opt{validOnly, &rules, 0};
      std::vector<CorpusMetrics> cols;
      std::vector<std::string> headers;
      if (metricSources.empty()) {
        cols.push_back(compute_metrics(*repo, AllDocuments{}, opt));
        headers.push_back("all");
      }
      for (const auto& s : metricSources) {
        if (!repo->has_source(s)) throw Error(ErrorCode::not_found, "unknown source '" + s + "'");
        cols.push_back(compute_metrics(*repo, SourceScope{s}, opt));
        headers.push_back(s);
      }
      if (g.json) {
        out << (cols.size() == 1 ? json(cols[0]) : json(cols)).dump(2) << '\n';
      } else {
        out << render_metrics_table(cols, headers);
        if (validOnly) out << "rule set " << rules.version() << '\n';
      }
      return kExitOk;
    }
    if (*common) {
      auto repo = open_store(g);
      const auto m = common_matrix(*repo, split_commas(commonSources));
      if (g.json) out << json(m).dump(2) << '\n';
      else out << render_common_matrix(m);
      return kExitOk;
    }
    if (*limits) return cmd_limits(g, vocab, maxWords, table, digits, wordLists, out);
    if (*project) return cmd_project(g, pointsFile, planFile, projValid, projRules, targets, at, out);
    if (*validate) return cmd_validate(g, sample, valRules, seed, valSource, out);
    if (*audit) {
      auto repo = open_store(g);
      const auto report = repo->audit();
      if (g.json) {
        out << json(report).dump(2) << '\n';
      } else {
        out << "documents " << report.documents << ", sentences " << report.sentences << ", sources "
            << report.sources << ", translations " << report.translations << ", duplicate groups "
            << report.duplicateGroups << '\n';
        for (const auto& f : report.findings) out << "finding\t" << f.check << '\t' << f.subject << '\t' << f.detail << '\n';
        out << (report.ok() ? "ok" : "FAILED") << '\n';
      }
      return report.ok() ? kExitOk : kExitData;
    }
    if (*serve) {
      auto repo = open_store(g);
      ApiConfig cfg;
      if (!pairs.empty()) cfg.languagePairs = parse_language_pairs(pairs);
      cfg.maxUploadBytes = maxUploadMb * 1024 * 1024;
      cfg.rules = load_rules(rulesFile);
      Api api(*repo, cfg);
      HttpServer server(api);
      const int bound = server.bind(host, port);
      if (bound < 0) throw Error(ErrorCode::internal, "cannot bind " + host + ":" + std::to_string(port));
      err << "listening on http://" << host << ':' << bound << kApiBase << '\n';
      return server.run() ? kExitOk : kExitData;
    }
  } catch (const CLI::ParseError& e) {
    err << "error\tusage\t" << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error\t" << to_string(e.code()) << '\t' << e.what();
    for (const auto& [k, v] : e.details()) err << '\t' << k << '=' << v;
    err << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error\tinternal\t" << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace parrot
