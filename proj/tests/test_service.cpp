#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"
#include "parrot/json_io.hpp"
#include "parrot/memory_repository.hpp"
#include "parrot/service.hpp"

using namespace parrot;
using nlohmann::json;

namespace {

std::string parrots() {
  std::ifstream in(PARROT_TEST_DATA "/parrots.txt");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ApiRequest get(const std::string& path, std::map<std::string, std::string> query = {}) {
  return {"GET", "/api/v1" + path, std::move(query), "", "", {}};
}

ApiRequest post(const std::string& path, std::string body, std::string type = "application/json",
                std::map<std::string, std::string> query = {}) {
  return {"POST", "/api/v1" + path, std::move(query), std::move(body), std::move(type), {}};
}

json body(const ApiResponse& r) { return json::parse(r.body); }

struct Fixture {
  MemoryRepository repo;
  Api api{repo};

  ApiResponse upload_parrots(const std::string& name = "parrots.txt") {
    return api.handle(post("/documents", parrots(), "text/plain; charset=utf-8", {{"sourceTag", "ex"}, {"name", name}}));
  }
};

}  // namespace

TEST_CASE_FIXTURE(Fixture, "upload and browse") {
  const auto up = upload_parrots();
  CHECK(up.status == 201);
  const auto j = body(up);
  CHECK(j["ingestStats"] == json{{"sentences", 4}, {"newDistinct", 3}, {"reusedDistinct", 1}});
  const auto docId = j["documentId"].get<std::int64_t>();

  const auto dup = upload_parrots();
  CHECK(dup.status == 409);
  CHECK(body(dup)["code"] == "already_ingested");

  const auto html = api.handle(post("/documents", "<p>x</p>", "text/html", {{"name", "a.html"}}));
  CHECK(html.status == 415);
  CHECK(body(html)["code"] == "unsupported_media");

  ApiRequest multi = post("/documents", "", "multipart/form-data", {{"sourceTag", "m"}});
  multi.files.push_back({"file", "upload.txt", "text/plain", "Uploaded text. Another one."});
  const auto mj = body(api.handle(multi));
  CHECK(mj["ingestStats"]["sentences"] == 2);

  const auto list = body(api.handle(get("/documents", {{"query", "parrot"}})));
  CHECK(list["total"] == 1);
  CHECK(list["items"][0]["mimeType"] == "text/plain");

  const auto doc = body(api.handle(get("/documents/" + std::to_string(docId))));
  CHECK(doc["byteCount"] == 140);
  CHECK(doc["sentences"].size() == 4);
  CHECK(doc["sentences"][0]["occurrenceCount"] == 2);

  const auto sentences = body(api.handle(get("/sentences", {{"minOccurrences", "2"}})));
  REQUIRE(sentences["total"] == 1);
  const auto sid = sentences["items"][0]["id"].get<std::int64_t>();
  const auto sdetail = body(api.handle(get("/sentences/" + std::to_string(sid))));
  CHECK(sdetail["occurrenceCount"] == 2);
  CHECK(sdetail["documents"].size() == 1);

  CHECK(api.handle(get("/documents/999")).status == 404);
  CHECK(api.handle(get("/nowhere")).status == 404);
  CHECK(api.handle({"GET", "/other", {}, "", "", {}}).status == 404);
  CHECK(api.handle(get("/documents", {{"pageSize", "5000"}})).status == 400);
  CHECK(body(api.handle(get("/documents", {{"page", "50"}})))["items"].empty());
  CHECK(api.handle(get("/documents", {{"page", "abc"}})).status == 400);
}

TEST_CASE_FIXTURE(Fixture, "translation endpoints") {
  upload_parrots();
  const auto sid = repo.find_sentence("When parrots do it, it's parroting.", "en")->id.value;
  const auto t = api.handle(post("/sentences/" + std::to_string(sid) + "/translations",
                                 R"({"targetLang":"pt","text":"Papagaios.","contributor":"ana"})"));
  REQUIRE(t.status == 200);
  const auto tid = body(t)["id"].get<std::int64_t>();
  CHECK(body(t)["votes"] == 0);
  const auto vote = body(api.handle(post("/translations/" + std::to_string(tid) + "/vote", "")));
  CHECK(vote["votes"] == 1);
  CHECK(api.handle(post("/translations/99/vote", "")).status == 404);

  json req{{"text", parrots()}, {"sourceLang", "en"}, {"targetLang", "pt"}};
  const auto r = body(api.handle(post("/translate", req.dump())));
  CHECK(r["coveragePct"] == 50.0);
  CHECK(r["segments"][0]["status"] == "translated");
  CHECK(r["segments"][1]["status"] == "missing");
  CHECK(r["segments"][0]["candidates"][0]["translatedText"] == "Papagaios.");

  req["targetLang"] = "fr";
  const auto bad = api.handle(post("/translate", req.dump()));
  CHECK(bad.status == 400);
  CHECK(body(bad)["details"]["supportedPairs"] == "en:pt,pt:en");
  CHECK(api.handle(post("/translate", "{not json")).status == 400);
  CHECK(api.handle(post("/sentences/1/translations", R"({"targetLang":"pt","text":""})")).status == 400);
}

TEST_CASE_FIXTURE(Fixture, "metrics, limits and projection endpoints mirror the modules") {
  auto empty = body(api.handle(get("/metrics")));
  CHECK(empty["sentences"] == 0);
  CHECK(empty["distinctPct"].is_null());
  upload_parrots();
  const auto m = api.handle(get("/metrics", {{"scope", "ex"}}));
  CHECK(m.body == json(compute_metrics(repo, SourceScope{"ex"})).dump());
  CHECK(api.handle(get("/metrics", {{"scope", "nope"}})).status == 404);
  const auto v = body(api.handle(get("/metrics", {{"validOnly", "true"}})));
  CHECK(v["validOnly"] == true);
  CHECK(v["ruleSetVersion"] == "default-1");

  const auto common = body(api.handle(get("/metrics/common", {{"sources", "ex,ex"}})));
  CHECK(common["common"] == 3);
  CHECK(api.handle(get("/metrics/common", {{"sources", "ex,zz"}})).status == 404);

  const auto lim = api.handle(get("/limits", {{"vocab", "2818"}, {"maxWords", "25"}}));
  CHECK(lim.body == json(sentence_ceiling(2818, 25)).dump());
  const auto lj = body(lim);
  CHECK(lj["dominantRendering"] == "177.22×10^84");
  CHECK(lj["exact"]["decimalString"].get<std::string>().size() == 87);
  CHECK(lj["exact"]["mantissa"].is_string());
  CHECK(body(api.handle(get("/limits", {{"table", "true"}})))["rows"].size() == 6);
  CHECK(api.handle(get("/limits")).status == 400);

  const std::string pts = "10076799973:2.97;18498004627:3.15;25986041152:3.23;32503697718:3.27;38441439656:3.29";
  const auto pj = body(api.handle(get("/projection", {{"points", pts}, {"targetPct", "5"}})));
  CHECK(pj["trend"]["r2"].get<double>() == doctest::Approx(0.983).epsilon(1e-3));
  CHECK(pj["requiredVolume"]["textCharacters"]["exponent"] == 13);
  CHECK(pj["requiredVolume"]["extrapolated"] == true);
  CHECK(pj.contains("warning"));
  const auto degenerate = api.handle(get("/projection"));
  CHECK(degenerate.status == 422);
  CHECK(body(degenerate)["code"] == "degenerate_fit");
  const auto down = api.handle(get("/projection", {{"points", "1:5;10:4"}}));
  CHECK(body(down)["code"] == "non_invertible_trend");
}

TEST_CASE("upload size cap") {
  MemoryRepository repo;
  ApiConfig cfg;
  cfg.maxUploadBytes = 10;
  Api api(repo, cfg);
  const auto r = api.handle(post("/documents", "This is longer than ten bytes.", "text/plain", {{"name", "x"}}));
  CHECK(r.status == 413);
  CHECK(body(r)["code"] == "validation_failed");
}

TEST_CASE("api description") {
  const auto d = json::parse(Api::description());
  CHECK(d["basePath"] == "/api/v1");
  CHECK(d["endpoints"].size() >= 12);
}

TEST_CASE("live HTTP round trip") {
  MemoryRepository repo;
  Api api(repo);
  HttpServer server(api);
  const int port = server.bind("127.0.0.1", 0);
  REQUIRE(port > 0);
  std::thread worker([&] { server.run(); });
  httplib::Client client("127.0.0.1", port);
  const auto up = client.Post("/api/v1/documents?sourceTag=ex&name=p.txt", parrots(), "text/plain");
  REQUIRE(up);
  CHECK(up->status == 201);
  CHECK(up->get_header_value("Access-Control-Allow-Origin") == "*");
  httplib::MultipartFormDataItems items{{"file", "Multi part. Upload.", "m.txt", "text/plain"}};
  const auto mp = client.Post("/api/v1/documents?sourceTag=mp", items);
  REQUIRE(mp);
  CHECK(mp->status == 201);
  const auto metrics = client.Get("/api/v1/metrics?scope=ex");
  REQUIRE(metrics);
  CHECK(json::parse(metrics->body)["withRepetitionsPct"].get<double>() == doctest::Approx(100.0 / 3));
  const auto spec = client.Get("/api/v1/spec");
  REQUIRE(spec);
  CHECK(spec->status == 200);
  const auto missing = client.Get("/elsewhere");
  REQUIRE(missing);
  CHECK(missing->status == 404);
  CHECK(json::parse(missing->body)["code"] == "not_found");
  server.stop();
  worker.join();
}
