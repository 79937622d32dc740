// Copyright 2026 The nlgal Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nlgal/protocol.h"

#include <string>
#include <thread>

#include <gtest/gtest.h>

#include "nlgal/backend_server.h"
#include "nlgal/conformance.h"
#include "nlgal/error.h"
#include "nlgal/http_backend.h"
#include "nlgal/rng.h"
#include "nlgal/toy_backend.h"

namespace nlgal {
namespace {

using protocol::json;

std::string random_text(Rng& rng) {
  static const std::string alphabet = "ab c\"\\\n\t\xc3\xa9{}[]:,";
  std::string s;
  const std::size_t n = rng.below(12);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = rng.below(alphabet.size());
    if (alphabet[k] == '\xc3') {
      s += "\xc3\xa9";
    } else if (alphabet[k] != '\xa9') {
      s += alphabet[k];
    }
  }
  return s;
}

// Round-trips through a serialized string, as on the wire.
json wire(const json& j) { return json::parse(j.dump()); }

TEST(Protocol, FuzzRoundTrip) {
  Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    protocol::FinetuneRequest ft;
    ft.base_model_id = "base";
    for (std::size_t i = rng.below(4); i > 0; --i) ft.examples.push_back({random_text(rng), random_text(rng)});
    ft.spec = {static_cast<int>(1 + rng.below(5)), rng.uniform() + 1e-6, static_cast<int>(1 + rng.below(16)),
               rng.next()};
    EXPECT_EQ(protocol::parse_finetune_request(wire(protocol::to_json(ft))), ft);

    protocol::GenerateRequest gr;
    gr.model_id = random_text(rng);
    for (std::size_t i = rng.below(4); i > 0; --i) gr.inputs.push_back({"id" + std::to_string(i), random_text(rng)});
    gr.mode = rng.below(2) ? GenerationMode::deterministic() : GenerationMode::sampled(2 + rng.below(5), rng.next());
    EXPECT_EQ(protocol::parse_generate_request(wire(protocol::to_json(gr))), gr);

    protocol::GenerateResponse gs;
    for (std::size_t i = rng.below(4); i > 0; --i) {
      auto& v = gs.generations["id" + std::to_string(i)];
      for (std::size_t k = 1 + rng.below(3); k > 0; --k) v.push_back({random_text(rng), {rng.uniform(), rng.normal() * rng.normal()}});
      for (auto& g : v) for (auto& h : g.token_entropies) h = std::abs(h);
    }
    EXPECT_EQ(protocol::parse_generate_response(wire(protocol::to_json(gs))), gs);

    protocol::EmbedResponse er;
    er.dim = 1 + rng.below(4);
    for (std::size_t i = rng.below(4); i > 0; --i) {
      std::vector<double> v(er.dim);
      for (auto& x : v) x = rng.normal() * 1e3;
      er.vectors["e" + std::to_string(i)] = v;
    }
    EXPECT_EQ(protocol::parse_embed_response(wire(protocol::to_json(er))), er);

    protocol::ScoreRequest sr;
    sr.kind = rng.below(2) ? ScoreKind::kFormality : ScoreKind::kSimilarity;
    for (std::size_t i = rng.below(4); i > 0; --i) {
      sr.items.push_back({random_text(rng), rng.below(2) ? std::optional<std::string>(random_text(rng)) : std::nullopt});
    }
    EXPECT_EQ(protocol::parse_score_request(wire(protocol::to_json(sr))), sr);

    protocol::ScoreResponse sp{{rng.uniform(), rng.uniform()}};
    EXPECT_EQ(protocol::parse_score_response(wire(protocol::to_json(sp))), sp);
  }
}

TEST(Protocol, ExactShapes) {
  EXPECT_EQ(protocol::to_json(protocol::GenerateRequest{"m", {}, GenerationMode::deterministic()})["mode"],
            "deterministic");
  const auto j = protocol::to_json(protocol::GenerateRequest{"m", {}, GenerationMode::sampled(3, 9)});
  EXPECT_EQ(j["mode"]["stochastic"]["num_samples"], 3);
  EXPECT_EQ(j["mode"]["stochastic"]["seed"], 9);
  EXPECT_TRUE(protocol::to_json(protocol::ScoreRequest{ScoreKind::kFormality, {{"x", std::nullopt}}})["items"][0]["reference"]
                  .is_null());
  EXPECT_EQ(protocol::error_body("boom"), json({{"error", "boom"}}));
}

void expect_field_error(const std::function<void()>& f, const std::string& field) {
  try {
    f();
    FAIL() << "no error for " << field;
  } catch (const BackendError& e) {
    EXPECT_NE(std::string(e.what()).find("'" + field + "'"), std::string::npos) << e.what();
  }
}

TEST(Protocol, MissingFieldsAreNamed) {
  expect_field_error([] { protocol::parse_finetune_request(json{{"examples", json::array()}}); }, "base_model_id");
  expect_field_error([] { protocol::parse_generate_request(json{{"model_id", "m"}, {"mode", "deterministic"}}); },
                     "inputs");
  expect_field_error([] { protocol::parse_generate_request(json{{"model_id", "m"}, {"inputs", json::array()}}); },
                     "mode");
  expect_field_error([] { protocol::parse_score_request(json{{"kind", "formality"}}); }, "items");
  expect_field_error([] { protocol::parse_finetune_response(json::object()); }, "model_id");
  expect_field_error([] { protocol::parse_score_response(json{{"scores", "no"}}); }, "scores");
  expect_field_error([] { protocol::parse_capabilities_response(json{{"flags", 3}}); }, "flags");
}

TEST(Protocol, DispatchStatuses) {
  ToyBackend toy;
  EXPECT_EQ(protocol::dispatch(toy, "/capabilities", "{}").status, 200);
  EXPECT_EQ(protocol::dispatch(toy, "/nowhere", "{}").status, 404);
  EXPECT_EQ(protocol::dispatch(toy, "/generate", "{not json").status, 400);
  const auto r = protocol::dispatch(toy, "/generate",
                                    R"({"model_id":"ghost","inputs":[{"id":"a","text":"x"}],"mode":"deterministic"})");
  EXPECT_EQ(r.status, 400);
  EXPECT_TRUE(r.body.contains("error"));
}

class ServedToy : public ::testing::Test {
 protected:
  void SetUp() override {
    server_ = std::make_unique<BackendServer>(toy_);
    port_ = server_->bind("127.0.0.1", 0);
    thread_ = std::thread([this] { server_->serve(); });
    server_->wait_until_ready();
  }
  void TearDown() override {
    server_->stop();
    thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

  ToyBackend toy_;
  std::unique_ptr<BackendServer> server_;
  std::thread thread_;
  int port_ = 0;
};

TEST_F(ServedToy, RemoteMatchesInProcess) {
  HttpBackend remote(url(), 30);
  ToyBackend local;
  EXPECT_EQ(remote.capabilities(), local.capabilities());
  const std::vector<TrainingPair> data = {{"a b c", "x y"}, {"d e", "z w v"}};
  const std::vector<TextInput> q = {{"1", "a b"}, {"2", "d e f"}};
  const auto hr = remote.finetune(ModelHandle::base_model(), data, {});
  const auto hl = local.finetune(ModelHandle::base_model(), data, {});
  EXPECT_EQ(remote.generate(hr, q, {}), local.generate(hl, q, {}));
  EXPECT_EQ(remote.generate(hr, q, GenerationMode::sampled(3, 4)), local.generate(hl, q, GenerationMode::sampled(3, 4)));
  EXPECT_EQ(remote.embed(q), local.embed(q));
  const std::vector<ScoreItem> items = {{"x y", "x y z"}};
  EXPECT_EQ(remote.score(ScoreKind::kSimilarity, items), local.score(ScoreKind::kSimilarity, items));
  EXPECT_THROW(remote.generate({"ghost", false}, q, {}), BackendError);
}

TEST_F(ServedToy, PassesConformance) {
  const auto report = conformance_check(url(), 30);
  for (const auto& c : report.checks) EXPECT_TRUE(c.passed) << c.name << ": " << c.detail;
  EXPECT_TRUE(report.passed());
  EXPECT_GE(report.checks.size(), 14u);
}

TEST(HttpBackend, UnreachableIsConnectionError) {
  HttpBackend remote("http://127.0.0.1:1", 2);
  EXPECT_THROW(remote.capabilities(), ConnectionError);
}

TEST(Conformance, InProcessToyPasses) {
  ToyBackend toy;
  const auto report = conformance_check(toy);
  EXPECT_TRUE(report.passed());
  EXPECT_EQ(report.failures(), 0u);
}

}  // namespace
}  // namespace nlgal
