// Copyright 2026 The blindlat Authors.
// SPDX-License-Identifier: Apache-2.0

#include "blindlat/games.hpp"

#include <algorithm>
#include <cmath>

#include "blindlat/hashing.hpp"

namespace blindlat {
namespace {

RandomStream game_stream(std::uint64_t seed, std::string_view role) {
  ByteWriter w;
  w.u64(seed);
  return RandomStream::derive(std::string("blindlat.games.") + std::string(role), w.bytes());
}

Bytes blind_point(const Ring& ring, ByteSpan message) { return ring_message(ring, message); }

}  // namespace

BlindSet::BlindSet(Epsilon epsilon, Bytes seed) : epsilon_(epsilon), seed_(std::move(seed)) {}

bool BlindSet::contains(ByteSpan point) {
  Bytes key(point.begin(), point.end());
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  const Bytes h = keyed_hash(seed_, "blindlat.blindset", point);
  const std::uint32_t v = h[0] | static_cast<std::uint32_t>(h[1]) << 8;
  const bool in = v < epsilon_.threshold();
  memo_.emplace(std::move(key), in);
  return in;
}

std::string_view response_name(Response r) {
  switch (r) {
    case Response::kAnswered:
      return "answered";
    case Response::kBlinded:
      return "blinded";
    case Response::kRejected:
      return "rejected";
    case Response::kCorrupted:
      return "corrupted";
    case Response::kLeaked:
      return "leaked";
  }
  return "unknown";
}

BuOracle::BuOracle(const SignatureScheme& scheme, Epsilon eps, std::uint64_t seed, bool leak)
    : scheme_(&scheme),
      coins_(game_stream(seed, "adversary")),
      signer_coins_(game_stream(seed, "signer")),
      blind_(eps, game_stream(seed, "blindset").bytes(32)),
      leak_(leak) {
  RandomStream keygen = game_stream(seed, "keygen");
  std::tie(vk_, sk_) = scheme.gen(keygen);
}

std::optional<Bytes> BuOracle::sign(ByteSpan msg) {
  if (blind_.contains(msg)) {
    log_.queries.push_back({"sign", Bytes(msg.begin(), msg.end()), Response::kBlinded});
    return std::nullopt;
  }
  log_.queries.push_back({"sign", Bytes(msg.begin(), msg.end()), Response::kAnswered});
  return scheme_->sign(sk_, vk_, msg, signer_coins_);
}

std::optional<Bytes> BuOracle::leaked_sk() {
  if (!leak_) return std::nullopt;
  log_.queries.push_back({"leak", {}, Response::kLeaked});
  return sk_;
}

GameResult bu_game(const SignatureScheme& scheme, const BuAdversary& adversary, Epsilon epsilon, std::uint64_t seed,
                   bool leak_secret_key) {
  BuOracle oracle(scheme, epsilon, seed, leak_secret_key);
  std::optional<std::pair<Bytes, Bytes>> forgery = adversary(oracle);
  GameResult result;
  if (forgery) {
    const auto& [msg, sig] = *forgery;
    result.win = oracle.blind_.contains(msg) && scheme.verify(oracle.vk_, msg, sig);
  }
  oracle.log_.outcome = result.win;
  result.log = std::move(oracle.log_);
  return result;
}

RingOracle::RingOracle(const RingGameConfig& config, std::size_t count, std::optional<Epsilon> epsilon,
                       std::uint64_t seed)
    : config_(config), coins_(game_stream(seed, "adversary")), signer_coins_(game_stream(seed, "signer")) {
  if (count < 2) throw ParameterError("ring games need at least two keys");
  RandomStream keygen = game_stream(seed, "keygen");
  for (std::size_t i = 0; i < count; ++i) {
    pairs_.push_back(rs_gen(config.params, keygen, *config.zap));
    vks_.push_back(pairs_.back().vk);
  }
  if (epsilon) blind_.emplace(*epsilon, game_stream(seed, "blindset").bytes(32));
}

std::optional<RingSignature> RingOracle::sign(std::size_t i, const Ring& ring, ByteSpan message) {
  Bytes point = blind_point(ring, message);
  signed_points_.insert(point);
  if (i >= pairs_.size() || std::find(ring.begin(), ring.end(), vks_[i]) == ring.end()) {
    log_.queries.push_back({"sign", std::move(point), Response::kRejected});
    return std::nullopt;
  }
  if (blind_ && blind_->contains(point)) {
    log_.queries.push_back({"sign", std::move(point), Response::kBlinded});
    return std::nullopt;
  }
  log_.queries.push_back({"sign", std::move(point), Response::kAnswered});
  return rs_sign(pairs_[i].sk, ring, message, signer_coins_, *config_.zap);
}

RingKeyPair RingOracle::corrupt(std::size_t i) {
  if (i >= pairs_.size()) throw ParameterError("corrupt: index out of range");
  log_.corrupted.insert(i);
  ByteWriter w;
  w.u64(i);
  log_.queries.push_back({"corrupt", std::move(w).take(), Response::kCorrupted});
  return pairs_[i];
}

std::optional<RingSecretKey> RingOracle::leaked_sk(std::size_t i) {
  if (!config_.leak_secret_keys || i >= pairs_.size()) return std::nullopt;
  ByteWriter w;
  w.u64(i);
  log_.queries.push_back({"leak", std::move(w).take(), Response::kLeaked});
  return pairs_[i].sk;
}

GameResult ring_game(const RingGameConfig& config, const RingAdversary& adversary, std::size_t count,
                     std::optional<Epsilon> epsilon, std::uint64_t seed) {
  RingOracle oracle(config, count, epsilon, seed);
  std::optional<RingForgery> forgery = adversary(oracle);
  GameResult result;
  if (forgery && !forgery->ring.empty()) {
    bool honest = true;
    for (const auto& vk : forgery->ring) {
      auto it = std::find(oracle.vks_.begin(), oracle.vks_.end(), vk);
      honest = honest && it != oracle.vks_.end() &&
               !oracle.log_.corrupted.count(static_cast<std::size_t>(it - oracle.vks_.begin()));
    }
    const Bytes point = blind_point(forgery->ring, forgery->message);
    const bool fresh = epsilon ? oracle.blind_->contains(point) : !oracle.signed_points_.count(point);
    result.win = honest && fresh && rs_verify(forgery->ring, forgery->message, forgery->sig, *config.zap);
  }
  oracle.log_.outcome = result.win;
  result.log = std::move(oracle.log_);
  return result;
}

GameResult ring_euf_game(const RingGameConfig& config, const RingAdversary& adversary, std::size_t count,
                         std::uint64_t seed) {
  return ring_game(config, adversary, count, std::nullopt, seed);
}

GameResult ring_bu_game(const RingGameConfig& config, const RingAdversary& adversary, std::size_t count,
                        Epsilon epsilon, std::uint64_t seed) {
  return ring_game(config, adversary, count, epsilon, seed);
}

GameResult ring_anon_game(const RingGameConfig& config, const AnonAdversary& adversary, std::size_t count,
                          std::uint64_t seed) {
  if (count < 2) throw ParameterError("ring games need at least two keys");
  RandomStream keygen = game_stream(seed, "keygen");
  RandomStream coins = game_stream(seed, "adversary");
  RandomStream challenger = game_stream(seed, "challenger");
  std::vector<RingKeyPair> pairs;
  for (std::size_t i = 0; i < count; ++i) pairs.push_back(rs_gen(config.params, keygen, *config.zap));
  GameResult result;
  const AnonChallenge ch = adversary.choose(pairs, coins);
  auto member = [&](std::size_t i) {
    return i < pairs.size() && std::find(ch.ring.begin(), ch.ring.end(), pairs[i].vk) != ch.ring.end();
  };
  if (!member(ch.i0) || !member(ch.i1)) {
    result.aborted = true;
    result.log.queries.push_back({"challenge", blind_point(ch.ring, ch.message), Response::kRejected});
    return result;
  }
  result.log.queries.push_back({"challenge", blind_point(ch.ring, ch.message), Response::kAnswered});
  const bool b = challenger.bit();
  const RingSignature sig = rs_sign(pairs[b ? ch.i1 : ch.i0].sk, ch.ring, ch.message, challenger, *config.zap);
  result.win = adversary.guess(sig, ch, pairs, coins) == b;
  result.log.outcome = result.win;
  return result;
}

EquivalenceStats equivalence_experiment(Direction direction, std::size_t p, std::size_t runs, std::uint64_t seed,
                                        std::optional<Epsilon> epsilon) {
  if (p < 2) throw ParameterError("equivalence_experiment: p must be at least 2");
  if (runs < 1) throw ParameterError("equivalence_experiment: need at least one run");
  const Epsilon eps = epsilon ? *epsilon : Epsilon(1, static_cast<std::uint32_t>(p));
  EquivalenceStats stats{direction, p, runs, eps.value(), 0, 0};
  RandomStream rng = game_stream(seed, "equivalence");
  std::size_t hits = 0;
  for (std::size_t run = 0; run < runs; ++run) {
    BlindSet blind(eps, rng.bytes(32));
    if (direction == Direction::kNecessity) {
      // p distinct queries, each answered unless blinded.
      bool all = true;
      for (std::size_t i = 0; i < p; ++i) {
        ByteWriter w;
        w.u64(i);
        all = !blind.contains(w.bytes()) && all;
      }
      hits += all;
    } else {
      // Queries over a small domain so forgeries often repeat one.
      std::set<std::uint64_t> answered;
      for (std::size_t i = 0; i < p; ++i) {
        const std::uint64_t m = rng.uniform(2 * p);
        ByteWriter w;
        w.u64(m);
        if (!blind.contains(w.bytes())) answered.insert(m);
      }
      const std::uint64_t forged = rng.uniform(2 * p);
      ByteWriter w;
      w.u64(forged);
      hits += blind.contains(w.bytes()) && answered.count(forged);
    }
  }
  stats.measured = static_cast<double>(hits) / static_cast<double>(runs);
  stats.predicted = direction == Direction::kNecessity ? std::pow(1 - eps.value(), static_cast<double>(p)) : 0.0;
  return stats;
}

namespace adversaries {

BuAdversary bu_key_leak() {
  return [](BuOracle& o) -> std::optional<std::pair<Bytes, Bytes>> {
    const std::optional<Bytes> sk = o.leaked_sk();
    if (!sk) return std::nullopt;
    Bytes msg = o.coins().bytes(16);
    Bytes sig = o.scheme().sign(*sk, o.vk(), msg, o.coins());
    return std::make_pair(std::move(msg), std::move(sig));
  };
}

BuAdversary bu_replay() {
  return [](BuOracle& o) -> std::optional<std::pair<Bytes, Bytes>> {
    for (int i = 0; i < 16; ++i) {
      Bytes msg = o.coins().bytes(16);
      if (auto sig = o.sign(msg)) return std::make_pair(std::move(msg), std::move(*sig));
    }
    return std::nullopt;
  };
}

RingAdversary ring_key_leak() {
  return [](RingOracle& o) -> std::optional<RingForgery> {
    const std::optional<RingSecretKey> sk = o.leaked_sk(0);
    if (!sk) return std::nullopt;
    Bytes msg = o.coins().bytes(16);
    RingSignature sig = rs_sign(*sk, o.keys(), msg, o.coins(), o.zap());
    return RingForgery{o.keys(), std::move(msg), std::move(sig)};
  };
}

RingAdversary ring_replay() {
  return [](RingOracle& o) -> std::optional<RingForgery> {
    for (int i = 0; i < 16; ++i) {
      Bytes msg = o.coins().bytes(16);
      if (auto sig = o.sign(0, o.keys(), msg)) return RingForgery{o.keys(), std::move(msg), std::move(*sig)};
    }
    return std::nullopt;
  };
}

RingAdversary ring_corrupt() {
  return [](RingOracle& o) -> std::optional<RingForgery> {
    const RingKeyPair kp = o.corrupt(0);
    Bytes msg = o.coins().bytes(16);
    RingSignature sig = rs_sign(kp.sk, o.keys(), msg, o.coins(), o.zap());
    return RingForgery{o.keys(), std::move(msg), std::move(sig)};
  };
}

namespace {

AnonChallenge first_two(const std::vector<RingKeyPair>& pairs, RandomStream& rng) {
  return {Ring{pairs[0].vk, pairs[1].vk}, rng.bytes(16), 0, 1};
}

}  // namespace

AnonAdversary anon_random_guess() {
  return {first_two, [](const RingSignature&, const AnonChallenge&, const std::vector<RingKeyPair>&,
                        RandomStream& rng) { return rng.bit(); }};
}

AnonAdversary anon_witness_reader() {
  return {first_two, [](const RingSignature& sig, const AnonChallenge& ch, const std::vector<RingKeyPair>& pairs,
                        RandomStream& rng) {
            try {
              return StubZap::open(sig.pi).second.vk == pairs[ch.i1].vk.vk;
            } catch (const std::exception&) {
              return rng.bit();
            }
          }};
}

}  // namespace adversaries

}  // namespace blindlat
