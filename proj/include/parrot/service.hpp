#pragma once

#include <condition_variable>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "parrot/error.hpp"
#include "parrot/limits.hpp"
#include "parrot/store.hpp"
#include "parrot/translation.hpp"
#include "parrot/validation.hpp"

namespace parrot {

inline constexpr std::string_view kApiBase = "/api/v1";

struct UploadedFile {
  std::string field;
  std::string filename;
  std::string contentType;
  std::string content;
};

struct ApiRequest {
  std::string method;
  std::string path;  // without query string
  std::map<std::string, std::string> query;
  std::string body;
  std::string contentType;
  std::vector<UploadedFile> files;
};

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string contentType = "application/json";
};

struct ApiConfig {
  std::uint64_t maxUploadBytes = 50ull * 1024 * 1024;
  std::vector<LanguagePair> languagePairs = default_language_pairs();
  RuleSet rules = RuleSet::defaults();
  std::vector<WordList> wordLists = default_word_lists();
  std::string corsOrigin = "*";
};

int http_status(ErrorCode code);

// Transport-independent request dispatcher. Every handler is a thin adapter
// over the backing module; errors become {code, message, details}.
class Api {
 public:
  explicit Api(Repository& repo, ApiConfig config = {});

  ApiResponse handle(const ApiRequest& request);

  const ApiConfig& config() const { return config_; }
  static std::string description();

 private:
  ApiResponse dispatch(const ApiRequest& request);
  ApiResponse upload(const ApiRequest& request);

  Repository& repo_;
  ApiConfig config_;
  Translator translator_;

  // (sourceTag, name) keys with an ingestion in flight
  std::mutex ingestMutex_;
  std::condition_variable ingestDone_;
  std::set<std::pair<std::string, std::string>> inFlight_;
};

class HttpServer {
 public:
  explicit HttpServer(Api& api);
  ~HttpServer();

  // Port 0 binds any free port. Returns the bound port or -1.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  bool run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace parrot
