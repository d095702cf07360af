#include "coexpand/synth.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

namespace coexpand {

namespace {

std::string type_name(std::size_t i) { return "type" + std::to_string(i); }

// Gaussian directions, Gram-Schmidt while the dimension allows, then unit length.
std::vector<std::vector<float>> make_centers(std::size_t m, std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::vector<double>> basis;
  std::vector<std::vector<float>> centers;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> v(dim);
    for (auto& x : v) x = normal(rng);
    if (i < dim) {
      for (const auto& b : basis) {
        double dot = 0.0;
        for (std::size_t d = 0; d < dim; ++d) dot += v[d] * b[d];
        for (std::size_t d = 0; d < dim; ++d) v[d] -= dot * b[d];
      }
    }
    double n = 0.0;
    for (double x : v) n += x * x;
    n = std::sqrt(n);
    for (auto& x : v) x /= n;
    basis.push_back(v);
    centers.emplace_back(v.begin(), v.end());
  }
  return centers;
}

std::vector<float> jitter(const std::vector<float>& center, double sigma, std::mt19937_64& rng) {
  std::vector<float> v(center);
  if (sigma <= 0.0) return v;
  std::normal_distribution<double> noise(0.0, sigma);
  for (auto& x : v) x = static_cast<float>(x + noise(rng));
  return v;
}

}  // namespace

SynthFixture make_synth_fixture(const SynthConfig& config) {
  if (config.types < 2) throw std::invalid_argument("synth: need at least 2 types");
  if (config.dim == 0 || config.seeds_per_cluster == 0 || config.per_cluster == 0) {
    throw std::invalid_argument("synth: dim, per_cluster and seeds_per_cluster must be positive");
  }

  std::mt19937_64 rng(config.random_seed);
  SynthFixture fx;
  fx.centers = make_centers(config.types, config.dim, rng);

  std::vector<std::vector<float>> vec_content;
  std::vector<std::vector<float>> vec_context;
  auto add_entity = [&](const std::vector<float>& center) {
    vec_content.push_back(jitter(center, config.sigma, rng));
    vec_context.push_back(jitter(center, config.sigma, rng));
  };

  for (std::size_t c = 0; c < config.types; ++c) {
    for (std::size_t j = 0; j < config.per_cluster; ++j) {
      auto name = "t" + std::to_string(c) + "_c" + std::to_string(j);
      fx.candidates.push_back(name);
      fx.gold[name] = type_name(c);
      add_entity(fx.centers[c]);
    }
  }
  if (config.plant_midpoint) {
    std::vector<float> mid(config.dim);
    for (std::size_t d = 0; d < config.dim; ++d) mid[d] = 0.5f * (fx.centers[0][d] + fx.centers[1][d]);
    fx.candidates.push_back("mid_t0_t1");
    add_entity(mid);
  }
  for (std::size_t c = 0; c < config.types; ++c) {
    SeedType type{type_name(c), {}};
    for (std::size_t j = 0; j < config.seeds_per_cluster; ++j) {
      auto name = "t" + std::to_string(c) + "_s" + std::to_string(j);
      type.seeds.push_back(name);
      fx.gold[name] = type_name(c);
      add_entity(fx.centers[c]);
    }
    fx.seeds.types.push_back(std::move(type));
  }

  for (std::size_t id = 0; id < vec_content.size(); ++id) {
    fx.embeddings.push_back({static_cast<EntityId>(id), std::move(vec_content[id]),
                             std::move(vec_context[id]), config.mentions_per_entity});
  }

  // Corpus: one document per entity, one mention per sentence, plus a
  // closing sentence naming a random other entity.
  std::vector<std::string> names(fx.candidates);
  for (const auto& t : fx.seeds.types) names.insert(names.end(), t.seeds.begin(), t.seeds.end());
  std::uniform_int_distribution<std::size_t> pick(0, names.size() - 1);
  static const char* kTemplates[] = {"We moved the service to %s last week.",
                                     "Has anyone tried %s with large inputs?",
                                     "The docs for %s are out of date!"};
  for (std::size_t id = 0; id < names.size(); ++id) {
    std::string text;
    for (std::size_t m = 0; m < config.mentions_per_entity; ++m) {
      std::string s = kTemplates[m % 3];
      s.replace(s.find("%s"), 2, names[id]);
      if (!text.empty()) text += (m % 2 == 0) ? "\n" : " ";
      text += s;
    }
    std::size_t other = pick(rng);
    text += " Compare with " + names[other] + ".";
    char doc_id[32];
    std::snprintf(doc_id, sizeof(doc_id), "d%06zu", id);
    fx.corpus.push_back({doc_id, std::move(text)});
  }
  return fx;
}

}  // namespace coexpand
