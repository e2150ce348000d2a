#include "parrot/service.hpp"

#include <charconv>
#include <regex>

#include "httplib.h"
#include "parrot/error.hpp"
#include "parrot/json_io.hpp"
#include "parrot/metrics.hpp"
#include "parrot/projection.hpp"

namespace parrot {

namespace {

ApiResponse json_response(const json& body, int status = 200) {
  return {status, body.dump(), "application/json"};
}

std::optional<std::string> param(const ApiRequest& r, const std::string& key) {
  const auto it = r.query.find(key);
  if (it == r.query.end() || it->second.empty()) return std::nullopt;
  return it->second;
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || p != text.data() + text.size()) {
    throw Error(ErrorCode::validation_failed, "parameter '" + key + "' is not a valid number",
                {{"parameter", key}, {"value", text}});
  }
  return value;
}

template <class T>
std::optional<T> number_param(const ApiRequest& r, const std::string& key) {
  const auto v = param(r, key);
  if (!v) return std::nullopt;
  return parse_number<T>(key, *v);
}

template <class T>
T required_number(const ApiRequest& r, const std::string& key) {
  auto v = number_param<T>(r, key);
  if (!v) throw Error(ErrorCode::validation_failed, "missing parameter '" + key + "'", {{"parameter", key}});
  return *v;
}

bool flag_param(const ApiRequest& r, const std::string& key) {
  const auto v = param(r, key);
  if (!v) return false;
  if (*v == "true" || *v == "1") return true;
  if (*v == "false" || *v == "0") return false;
  throw Error(ErrorCode::validation_failed, "parameter '" + key + "' must be true or false", {{"parameter", key}});
}

PageRequest page_param(const ApiRequest& r) {
  PageRequest req;
  if (auto p = number_param<std::uint64_t>(r, "page")) req.page = *p;
  if (auto s = number_param<std::uint64_t>(r, "pageSize")) req.pageSize = *s;
  check_page_request(req);
  return req;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto end = s.find(',', start);
    if (end == std::string::npos) end = s.size();
    if (end > start) out.push_back(s.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

json parse_body(const ApiRequest& r) {
  auto body = json::parse(r.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) {
    throw Error(ErrorCode::validation_failed, "request body must be a JSON object");
  }
  return body;
}

std::string string_field(const json& body, const std::string& key, std::optional<std::string> fallback = {}) {
  const auto it = body.find(key);
  if (it == body.end() || it->is_null()) {
    if (fallback) return *fallback;
    throw Error(ErrorCode::validation_failed, "missing field '" + key + "'", {{"field", key}});
  }
  if (!it->is_string()) throw Error(ErrorCode::validation_failed, "field '" + key + "' must be a string", {{"field", key}});
  return it->get<std::string>();
}

std::string media_base(std::string_view type) {
  auto semi = type.find(';');
  std::string base(type.substr(0, semi));
  while (!base.empty() && base.back() == ' ') base.pop_back();
  for (auto& c : base) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return base;
}

Scope scope_param(const ApiRequest& r) {
  const auto s = param(r, "scope");
  if (!s || *s == "all") return AllDocuments{};
  return SourceScope{*s};
}

template <class T>
T id_from(const std::string& text) {
  return T{parse_number<std::int64_t>("id", text)};
}

const std::regex kDocumentPath(R"(/documents/([0-9]+))");
const std::regex kSentencePath(R"(/sentences/([0-9]+))");
const std::regex kTranslationsPath(R"(/sentences/([0-9]+)/translations)");
const std::regex kVotePath(R"(/translations/([0-9]+)/vote)");

}  // namespace

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::not_found: return 404;
    case ErrorCode::validation_failed: return 400;
    case ErrorCode::already_ingested: return 409;
    case ErrorCode::unsupported_media: return 415;
    case ErrorCode::degenerate_fit:
    case ErrorCode::non_invertible_trend: return 422;
    case ErrorCode::internal: return 500;
  }
  return 500;
}

Api::Api(Repository& repo, ApiConfig config)
    : repo_(repo), config_(std::move(config)), translator_(repo, config_.languagePairs) {}

ApiResponse Api::handle(const ApiRequest& request) {
  try {
    return dispatch(request);
  } catch (const Error& e) {
    auto resp = json_response(error_json(std::string(to_string(e.code())), e.what(), e.details()), http_status(e.code()));
    if (e.code() == ErrorCode::validation_failed && e.details().count("limitBytes")) resp.status = 413;
    return resp;
  } catch (const std::exception& e) {
    return json_response(error_json("internal", e.what()), 500);
  }
}

ApiResponse Api::dispatch(const ApiRequest& r) {
  if (r.path.compare(0, kApiBase.size(), kApiBase) != 0) {
    throw Error(ErrorCode::not_found, "no route for " + r.path);
  }
  const std::string path = r.path.substr(kApiBase.size());
  const bool get = r.method == "GET";
  const bool post = r.method == "POST";
  std::smatch m;

  if (get && path == "/spec") return {200, description(), "application/json"};

  if (path == "/documents") {
    if (post) return upload(r);
    if (get) {
      DocumentFilter f;
      f.sourceTag = param(r, "source");
      f.nameSubstring = param(r, "query");
      return json_response(repo_.list_documents(f, page_param(r)));
    }
  }
  if (get && std::regex_match(path, m, kDocumentPath)) {
    return json_response(repo_.get_document(id_from<DocumentId>(m[1])));
  }
  if (get && path == "/sentences") {
    SentenceFilter f;
    f.textSubstring = param(r, "query");
    f.languageTag = param(r, "language");
    f.minOccurrences = number_param<std::uint64_t>(r, "minOccurrences");
    return json_response(repo_.list_sentences(f, page_param(r)));
  }
  if (get && std::regex_match(path, m, kSentencePath)) {
    auto detail = repo_.get_sentence(id_from<SentenceId>(m[1]));
    rank_translations(detail.translations);
    return json_response(detail);
  }
  if (post && std::regex_match(path, m, kTranslationsPath)) {
    const auto body = parse_body(r);
    const auto t = translator_.add_translation(id_from<SentenceId>(m[1]), string_field(body, "targetLang"),
                                               string_field(body, "text"), string_field(body, "contributor", ""));
    return json_response(t);
  }
  if (post && std::regex_match(path, m, kVotePath)) {
    const auto t = translator_.vote(id_from<TranslationId>(m[1]));
    return json_response(json{{"id", t.id}, {"votes", t.votes}});
  }
  if (post && path == "/translate") {
    const auto body = parse_body(r);
    const auto text = normalize_plain_text(string_field(body, "text"));
    return json_response(
        translator_.translate_text(text, string_field(body, "sourceLang"), string_field(body, "targetLang")));
  }
  if (get && path == "/metrics") {
    MetricsOptions opt;
    opt.validOnly = flag_param(r, "validOnly");
    opt.rules = &config_.rules;
    return json_response(compute_metrics(repo_, scope_param(r), opt));
  }
  if (get && path == "/metrics/common") {
    const auto sources = split_list(param(r, "sources").value_or(""));
    if (sources.empty()) throw Error(ErrorCode::validation_failed, "parameter 'sources' is required");
    if (sources.size() == 2) {
      return json_response(json{{"sources", sources},
                                {"common", common_distinct_sentences(repo_, sources[0], sources[1])}});
    }
    return json_response(common_matrix(repo_, sources));
  }
  if (get && path == "/limits") {
    if (flag_param(r, "table")) {
      const unsigned lengths[] = {kAdvisedSentenceWords, kIncomprehensibleSentenceWords};
      json rows = json::array();
      for (const auto& row : ceiling_table(config_.wordLists, lengths)) {
        rows.push_back({{"wordList", row.list}, {"ceilings", row.ceilings}});
      }
      return json_response(json{{"lengths", lengths}, {"rows", rows}});
    }
    const auto vocab = required_number<std::uint64_t>(r, "vocab");
    const auto words = number_param<unsigned>(r, "maxWords").value_or(kAdvisedSentenceWords);
    if (words > 100000) throw Error(ErrorCode::validation_failed, "maxWords is too large", {{"max", "100000"}});
    return json_response(sentence_ceiling(vocab, words));
  }
  if (get && path == "/projection") {
    const double target = number_param<double>(r, "targetPct").value_or(5.0);
    MetricsOptions opt;
    opt.validOnly = flag_param(r, "validOnly");
    opt.rules = &config_.rules;
    json report;
    std::vector<TrendPoint> points;
    if (const auto spec = param(r, "points")) {
      // "x:y;x:y;..."
      std::size_t start = 0;
      while (start < spec->size()) {
        auto end = spec->find(';', start);
        if (end == std::string::npos) end = spec->size();
        const auto item = spec->substr(start, end - start);
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw Error(ErrorCode::validation_failed, "points must be x:y pairs");
        points.push_back({parse_number<double>("points", item.substr(0, colon)),
                          parse_number<double>("points", item.substr(colon + 1))});
        start = end + 1;
      }
      report["pointsSource"] = "request";
    } else {
      DocumentFilter f;
      f.sourceTag = param(r, "source");
      if (f.sourceTag && !repo_.has_source(*f.sourceTag)) {
        throw Error(ErrorCode::not_found, "unknown source '" + *f.sourceTag + "'");
      }
      const auto groups = split_groups(repo_.document_ids(f), number_param<std::size_t>(r, "groups").value_or(5));
      auto series = snapshot_series(repo_, groups, opt);
      points = series.points;
      report["pointsSource"] = "snapshots";
      report["warnings"] = series.warnings;
    }
    const auto trend = fit_log_trend(points);
    const auto volume = required_volume(trend, target);
    report["points"] = points;
    report["validOnly"] = opt.validOnly;
    report["trend"] = trend;
    report["requiredVolume"] = volume;
    report["alternatives"] = compare_curve_families(points);
    if (volume.extrapolated) report["warning"] = "target lies outside the fitted range; extrapolated";
    return json_response(report);
  }
  throw Error(ErrorCode::not_found, "no route for " + r.method + " " + r.path);
}

ApiResponse Api::upload(const ApiRequest& r) {
  std::string content, contentType, name = param(r, "name").value_or("");
  if (!r.files.empty()) {
    const UploadedFile* file = &r.files.front();
    for (const auto& f : r.files)
      if (f.field == "file") file = &f;
    content = file->content;
    contentType = file->contentType;
    if (name.empty()) name = file->filename;
  } else {
    content = r.body;
    contentType = r.contentType;
  }
  if (content.size() > config_.maxUploadBytes) {
    throw Error(ErrorCode::validation_failed, "upload exceeds the size limit",
                {{"limitBytes", std::to_string(config_.maxUploadBytes)}});
  }
  auto base = media_base(contentType);
  if ((base.empty() || base == "application/octet-stream") && !name.empty()) {
    base = detect_mime(name).value_or(base);
  }
  if (base != kMimePlain) {
    throw Error(ErrorCode::unsupported_media, "only text/plain uploads are accepted",
                {{"mimeType", base.empty() ? "unknown" : base}});
  }
  if (name.empty()) throw Error(ErrorCode::validation_failed, "parameter 'name' is required");
  DocumentMeta meta;
  meta.sourceTag = param(r, "sourceTag").value_or("upload");
  meta.name = name;
  meta.languageTag = param(r, "language").value_or("en");
  meta.mimeType = std::string(kMimePlain);

  const auto key = std::make_pair(meta.sourceTag, meta.name);
  {
    std::unique_lock lock(ingestMutex_);
    ingestDone_.wait(lock, [&] { return !inFlight_.count(key); });
    inFlight_.insert(key);
  }
  struct Release {
    Api* api;
    std::pair<std::string, std::string> key;
    ~Release() {
      std::lock_guard lock(api->ingestMutex_);
      api->inFlight_.erase(key);
      api->ingestDone_.notify_all();
    }
  } release{this, key};

  const auto [id, stats] = ingest_document(repo_, meta, normalize_plain_text(content));
  return json_response(json{{"documentId", id}, {"ingestStats", stats}}, 201);
}

std::string Api::description() {
  const auto ep = [](const char* method, const char* path, const char* summary, json params = json::array()) {
    return json{{"method", method}, {"path", path}, {"summary", summary}, {"parameters", params}};
  };
  json doc;
  doc["basePath"] = kApiBase;
  doc["errorEnvelope"] = {{"code", "string"}, {"message", "string"}, {"details", "object"}};
  doc["errorCodes"] = {"not_found",      "validation_failed",    "already_ingested", "unsupported_media",
                       "degenerate_fit", "non_invertible_trend", "internal"};
  doc["bigNumber"] = {{"mantissa", "decimal string"}, {"exponent", "integer"}, {"decimalString", "string"}};
  doc["endpoints"] = {
      ep("POST", "/documents", "Upload a text/plain document (multipart field 'file' or raw body)",
         {"sourceTag", "name", "language"}),
      ep("GET", "/documents", "Search documents", {"query", "source", "page", "pageSize"}),
      ep("GET", "/documents/{id}", "Document detail with ordered sentences"),
      ep("GET", "/sentences", "Search sentences", {"query", "language", "minOccurrences", "page", "pageSize"}),
      ep("GET", "/sentences/{id}", "Sentence detail with documents and translations"),
      ep("POST", "/sentences/{id}/translations", "Contribute a translation {targetLang, text, contributor}"),
      ep("POST", "/translations/{id}/vote", "Endorse a translation"),
      ep("POST", "/translate", "Search-only translation {text, sourceLang, targetLang}"),
      ep("GET", "/metrics", "Corpus metrics; scope is 'all' or a source tag", {"scope", "validOnly"}),
      ep("GET", "/metrics/common", "Common distinct sentences between sources", {"sources"}),
      ep("GET", "/limits", "Sentence-count ceiling", {"vocab", "maxWords", "table"}),
      ep("GET", "/projection", "Logarithmic trend fit and required volume",
         {"targetPct", "validOnly", "points", "source", "groups"}),
      ep("GET", "/spec", "This document"),
  };
  return doc.dump(2);
}

struct HttpServer::Impl {
  httplib::Server server;
};

HttpServer::HttpServer(Api& api) : impl_(std::make_unique<Impl>()) {
  auto& server = impl_->server;
  server.set_payload_max_length(api.config().maxUploadBytes + 1024 * 1024);
  const std::string origin = api.config().corsOrigin;
  auto bridge = [&api, origin](const httplib::Request& req, httplib::Response& res) {
    ApiRequest r;
    r.method = req.method;
    r.path = req.path;
    for (const auto& [k, v] : req.params) r.query[k] = v;
    r.body = req.body;
    r.contentType = req.get_header_value("Content-Type");
    for (const auto& [field, f] : req.files) {
      r.files.push_back({field, f.filename, f.content_type, f.content});
    }
    if (!r.files.empty()) r.body.clear();
    const auto out = api.handle(r);
    res.status = out.status;
    res.set_content(out.body, out.contentType);
    res.set_header("Access-Control-Allow-Origin", origin);
  };
  const std::string pattern = std::string(kApiBase) + "/.*";
  server.Get(pattern, bridge);
  server.Post(pattern, bridge);
  server.Options(pattern, [origin](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", origin);
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
  server.set_error_handler([origin](const httplib::Request& req, httplib::Response& res) {
    if (res.status == 404 && res.body.empty()) {
      res.set_content(error_json("not_found", "no route for " + req.path).dump(), "application/json");
    }
    res.set_header("Access-Control-Allow-Origin", origin);
  });
}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::run() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

}  // namespace parrot
