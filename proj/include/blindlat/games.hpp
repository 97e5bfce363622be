// Copyright 2026 The blindlat Authors.
// SPDX-License-Identifier: Apache-2.0

// Classical security games. Adversaries are deterministic callbacks over an
// oracle handle; every game is a function of (seed, adversary).

#ifndef BLINDLAT_GAMES_HPP_
#define BLINDLAT_GAMES_HPP_

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "blindlat/ringsig.hpp"

namespace blindlat {

// Lazily sampled set containing each point independently with probability
// threshold / 2^16, where threshold = ceil(epsilon 2^16).
class BlindSet {
 public:
  BlindSet(Epsilon epsilon, Bytes seed);
  bool contains(ByteSpan point);
  const Epsilon& epsilon() const { return epsilon_; }
  std::size_t decided() const { return memo_.size(); }

 private:
  Epsilon epsilon_;
  Bytes seed_;
  std::map<Bytes, bool> memo_;
};

enum class Response : std::uint8_t { kAnswered, kBlinded, kRejected, kCorrupted, kLeaked };
std::string_view response_name(Response r);

struct LoggedQuery {
  std::string kind;
  Bytes payload;
  Response response;
};

struct GameLog {
  std::vector<LoggedQuery> queries;
  std::set<std::size_t> corrupted;
  bool outcome = false;
};

struct GameResult {
  bool win = false;
  // The challenger answered the challenge with bottom.
  bool aborted = false;
  GameLog log;
};

class BuOracle;
// The adversary returns (message, signature) or gives up.
using BuAdversary = std::function<std::optional<std::pair<Bytes, Bytes>>(BuOracle&)>;

// Blind unforgeability of an ordinary signature scheme.
class BuOracle {
 public:
  const Bytes& vk() const { return vk_; }
  const SignatureScheme& scheme() const { return *scheme_; }
  // nullopt for messages in the blind set.
  std::optional<Bytes> sign(ByteSpan msg);
  // Handed out only when the game is configured to leak it.
  std::optional<Bytes> leaked_sk();
  RandomStream& coins() { return coins_; }

 private:
  friend GameResult bu_game(const SignatureScheme&, const BuAdversary&, Epsilon, std::uint64_t, bool);
  BuOracle(const SignatureScheme& scheme, Epsilon eps, std::uint64_t seed, bool leak);

  const SignatureScheme* scheme_;
  RandomStream coins_;
  RandomStream signer_coins_;
  BlindSet blind_;
  Bytes vk_, sk_;
  bool leak_;
  GameLog log_;
};

// Wins iff the forgery verifies and its message is in the blind set.
GameResult bu_game(const SignatureScheme& scheme, const BuAdversary& adversary, Epsilon epsilon, std::uint64_t seed,
                   bool leak_secret_key = false);

struct RingForgery {
  Ring ring;
  Bytes message;
  RingSignature sig;
};

struct RingGameConfig {
  RingParams params;
  const Zap* zap = &default_zap();
  // Lets a calibration adversary read secret keys without corrupting.
  bool leak_secret_keys = false;
};

class RingOracle;
using RingAdversary = std::function<std::optional<RingForgery>(RingOracle&)>;

class RingOracle {
 public:
  const Ring& keys() const { return vks_; }
  // nullopt if VK_i is not in the ring or, in the BU game, (R, m) is blinded.
  std::optional<RingSignature> sign(std::size_t i, const Ring& ring, ByteSpan message);
  // Secret key and generation randomness; marks i corrupted.
  RingKeyPair corrupt(std::size_t i);
  std::optional<RingSecretKey> leaked_sk(std::size_t i);
  const Zap& zap() const { return *config_.zap; }
  RandomStream& coins() { return coins_; }

 private:
  friend GameResult ring_game(const RingGameConfig&, const RingAdversary&, std::size_t, std::optional<Epsilon>,
                              std::uint64_t);
  RingOracle(const RingGameConfig& config, std::size_t count, std::optional<Epsilon> epsilon, std::uint64_t seed);

  RingGameConfig config_;
  RandomStream coins_;
  RandomStream signer_coins_;
  std::vector<RingKeyPair> pairs_;
  Ring vks_;
  std::optional<BlindSet> blind_;
  std::set<Bytes> signed_points_;
  GameLog log_;
};

// Shared body of the two ring unforgeability games.
GameResult ring_game(const RingGameConfig& config, const RingAdversary& adversary, std::size_t count,
                     std::optional<Epsilon> epsilon, std::uint64_t seed);
// R* within the uncorrupted keys, (R*, m*) never queried, and a valid
// signature. Q >= 2.
GameResult ring_euf_game(const RingGameConfig& config, const RingAdversary& adversary, std::size_t count,
                         std::uint64_t seed);
// As above, with signing answered bottom on blinded (R, m) and the forgery
// required to be blinded.
GameResult ring_bu_game(const RingGameConfig& config, const RingAdversary& adversary, std::size_t count,
                        Epsilon epsilon, std::uint64_t seed);

struct AnonChallenge {
  Ring ring;
  Bytes message;
  std::size_t i0 = 0, i1 = 0;
};

// Full key exposure: the adversary sees every key pair with its randomness.
struct AnonAdversary {
  std::function<AnonChallenge(const std::vector<RingKeyPair>&, RandomStream&)> choose;
  std::function<bool(const RingSignature&, const AnonChallenge&, const std::vector<RingKeyPair>&, RandomStream&)> guess;
};

GameResult ring_anon_game(const RingGameConfig& config, const AnonAdversary& adversary, std::size_t count,
                          std::uint64_t seed);

enum class Direction : std::uint8_t { kNecessity, kSufficiency };

struct EquivalenceStats {
  Direction direction = Direction::kNecessity;
  std::size_t p = 0, runs = 0;
  double epsilon = 0;
  double measured = 0;
  double predicted = 0;
};

// Necessity: with epsilon = 1/p, the fraction of runs in which p fresh
// signing queries all escape the blind set, against (1 - 1/p)^p.
// Sufficiency: the fraction of runs in which a blinded forgery point was
// also answered by the signing oracle, against 0.
EquivalenceStats equivalence_experiment(Direction direction, std::size_t p, std::size_t runs, std::uint64_t seed,
                                        std::optional<Epsilon> epsilon = std::nullopt);

// Reference adversaries for calibrating the games.
namespace adversaries {

// Signs a fresh random message with the leaked key; wins iff it is blinded.
BuAdversary bu_key_leak();
// Forges by replaying an answered signature; never wins.
BuAdversary bu_replay();
// Signs a fresh message under the full key list with a leaked key.
RingAdversary ring_key_leak();
// Replays an answered signing query.
RingAdversary ring_replay();
// Corrupts member 0 and signs with its key.
RingAdversary ring_corrupt();
// Members 0 and 1 on a random message; a coin-flip guess.
AnonAdversary anon_random_guess();
// Members 0 and 1; reads the signer's vk out of a stub proof.
AnonAdversary anon_witness_reader();

}  // namespace adversaries

}  // namespace blindlat

#endif  // BLINDLAT_GAMES_HPP_
