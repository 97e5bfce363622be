// Copyright 2026 The blindlat Authors.
// SPDX-License-Identifier: Apache-2.0

// blindlat: key generation, signing and verification for the GPV, plain and
// ring schemes, parameter reports and game runs.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or input error.

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <random>
#include <string>

#include "blindlat/games.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace blindlat;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Bytes read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), {});
}

void write_file(const fs::path& path, ByteSpan data) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
}

// --seed N, or fresh OS entropy when omitted.
RandomStream stream_for(const std::optional<std::uint64_t>& seed, std::string_view purpose) {
  ByteWriter w;
  if (seed) {
    w.u64(*seed);
  } else {
    std::random_device rd;
    for (int i = 0; i < 8; ++i) w.u32(rd());
  }
  return RandomStream::derive(std::string("blindlat.cli.") + std::string(purpose), w.bytes());
}

std::uint64_t game_seed(const std::optional<std::uint64_t>& seed) {
  return seed ? *seed : stream_for(seed, "game").next_u64();
}

// "a/b" or a decimal in [0, 1].
Epsilon parse_epsilon(const std::string& text) {
  try {
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
      return Epsilon(static_cast<std::uint32_t>(std::stoul(text.substr(0, slash))),
                     static_cast<std::uint32_t>(std::stoul(text.substr(slash + 1))));
    }
    return Epsilon::from_double(std::stod(text));
  } catch (const std::logic_error&) {
    throw UsageError("--epsilon expects a/b or a decimal in [0, 1], got '" + text + "'");
  }
}

std::string magic_of(ByteSpan data) {
  return data.size() < 4 ? std::string() : std::string(data.begin(), data.begin() + 4);
}

json describe_lossy(const LossyParams& p) {
  return {{"n", p.n}, {"mbar", p.mbar}, {"q", p.q}, {"bound", p.bound}};
}

json describe_plain_params(const PlainParams& p) {
  return {{"n", p.n},   {"t", p.t},         {"k", p.k},
          {"d", p.d},   {"m", p.m},         {"q", p.q},
          {"s", p.s},   {"beta", p.beta},   {"sigsize", p.sigsize},
          {"epsilon", std::to_string(p.epsilon.num) + "/" + std::to_string(p.epsilon.den)}};
}

json describe_ct(const LossyCiphertext& c) {
  return {{"rows", c.c.rows()}, {"mbar", c.mbar}, {"q", c.c.modulus().value()}, {"bits", c.bits()}};
}

// Metadata of any artifact; secret material is never printed.
json describe(ByteSpan data) {
  const std::string magic = magic_of(data);
  json j{{"bytes", data.size()}, {"magic", magic}};
  if (magic == "GPVC") {
    const GpvPublicKey pk = GpvScheme::unpack_key(data);
    j["type"] = "gpv-verification-key";
    j["params"] = {{"n", pk.params.n}, {"m", pk.params.m}, {"q", pk.params.q.value()}, {"s", pk.params.s}};
  } else if (magic == "GPVS") {
    const GpvKeys keys = parse_gpv_keys(data);
    const PsfParams& p = keys.psf.params;
    j["type"] = "gpv-secret-key";
    j["params"] = {{"n", p.n}, {"m", p.m}, {"q", p.q.value()}, {"s", p.s}};
  } else if (magic == "PBUS" && data.size() > 5) {
    switch (data[5]) {
      case 1:
        j["type"] = "plain-verification-key";
        j["params"] = describe_plain_params(parse_plain_vk(data).params);
        break;
      case 2:
        j["type"] = "plain-signing-key";
        break;
      case 3:
        j["type"] = "plain-signature";
        j["length"] = parse_plain_signature(data).size();
        break;
      default:
        j["type"] = "plain-object";
    }
  } else if (magic == "RSVK") {
    const RingVerificationKey vk = parse_ring_vk(data);
    j["type"] = "ring-verification-key";
    j["scheme"] = std::string(scheme_name(vk.scheme));
    j["base_vk_bytes"] = vk.vk.size();
    j["lossy"] = describe_lossy(vk.pk.params);
    j["rho"] = to_hex(vk.rho);
  } else if (magic == "RSSK") {
    const RingSecretKey sk = parse_ring_sk(data);
    j["type"] = "ring-secret-key";
    j["scheme"] = std::string(scheme_name(sk.scheme));
    j["lossy"] = describe_lossy(sk.pk.params);
  } else if (magic == "RSIG") {
    const RingSignature sig = parse_ring_signature(data);
    j["type"] = "ring-signature";
    j["c1"] = describe_ct(sig.c1);
    j["c2"] = describe_ct(sig.c2);
    j["proof_bytes"] = sig.pi.size();
  } else {
    j["type"] = "unknown";
  }
  return j;
}

std::unique_ptr<SignatureScheme> make_scheme(const std::string& name, Index n, std::uint64_t q, Index m, Index t,
                                             const std::string& eps) {
  switch (parse_scheme_name(name)) {
    case BaseScheme::kGpv:
      return std::make_unique<GpvScheme>(GpvConfig{n, q, m});
    case BaseScheme::kPlain:
      return std::make_unique<PlainScheme>(plain_params_for(n, t, parse_epsilon(eps)));
  }
  throw UsageError("unknown scheme " + name);
}

// Every *.rsvk file in dir, in file name order.
Ring read_ring_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw UsageError(dir.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".rsvk") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw UsageError(dir.string() + " holds no .rsvk files");
  Ring ring;
  for (const auto& f : files) ring.push_back(parse_ring_vk(read_file(f)));
  return ring;
}

json rate_line(const std::string& game, const std::string& adversary, std::size_t runs, std::size_t wins,
               std::size_t aborted, double expected) {
  return {{"game", game},
          {"adversary", adversary},
          {"runs", runs},
          {"wins", wins},
          {"aborted", aborted},
          {"rate", runs ? static_cast<double>(wins) / static_cast<double>(runs) : 0.0},
          {"expected", expected}};
}

struct Options {
  std::optional<std::uint64_t> seed;
  std::string scheme = "gpv";
  Index n = 2, m = 0, t = 8;
  std::uint64_t q = 17;
  std::string epsilon;
  std::string format = "binary";
  std::string out, sk, vk, msg, sig, ring, in;
  std::string game;
  std::size_t runs = 0, keys = 3, p = 20;
};

int run_game(const Options& o) {
  const std::uint64_t base = game_seed(o.seed);
  const Epsilon eps = o.epsilon == "1/p" ? Epsilon(1, static_cast<std::uint32_t>(o.p)) : parse_epsilon(o.epsilon);
  auto emit = [](const json& j) { std::cout << j.dump() << '\n'; };
  if (o.game == "bu") {
    const auto scheme = make_scheme(o.scheme, o.n, o.q, o.m, o.t, "3/4");
    const std::size_t runs = o.runs ? o.runs : 1000;
    std::size_t leak = 0, replay = 0;
    for (std::size_t r = 0; r < runs; ++r) {
      leak += bu_game(*scheme, adversaries::bu_key_leak(), eps, base + r, true).win;
      replay += bu_game(*scheme, adversaries::bu_replay(), eps, base + r).win;
    }
    emit(rate_line("bu", "key-leak", runs, leak, 0, eps.value()));
    emit(rate_line("bu", "replay", runs, replay, 0, 0));
    return 0;
  }
  if (o.game == "ring-euf" || o.game == "ring-bu") {
    const bool bu = o.game == "ring-bu";
    const std::size_t runs = o.runs ? o.runs : 20;
    RingGameConfig plain, leaky;
    leaky.leak_secret_keys = true;
    auto play = [&](const RingGameConfig& c, const RingAdversary& adv, std::uint64_t s) {
      return bu ? ring_bu_game(c, adv, o.keys, eps, s) : ring_euf_game(c, adv, o.keys, s);
    };
    std::size_t leak = 0, replay = 0, corrupt = 0;
    for (std::size_t r = 0; r < runs; ++r) {
      leak += play(leaky, adversaries::ring_key_leak(), base + r).win;
      replay += play(plain, adversaries::ring_replay(), base + r).win;
      corrupt += play(plain, adversaries::ring_corrupt(), base + r).win;
    }
    emit(rate_line(o.game, "key-leak", runs, leak, 0, bu ? eps.value() : 1.0));
    emit(rate_line(o.game, "replay", runs, replay, 0, 0));
    emit(rate_line(o.game, "corrupt", runs, corrupt, 0, 0));
    return 0;
  }
  if (o.game == "ring-anon") {
    const std::size_t runs = o.runs ? o.runs : 20;
    RingGameConfig config;
    std::size_t guess = 0, reader = 0, aborted = 0;
    for (std::size_t r = 0; r < runs; ++r) {
      guess += ring_anon_game(config, adversaries::anon_random_guess(), o.keys, base + r).win;
      const GameResult g = ring_anon_game(config, adversaries::anon_witness_reader(), o.keys, base + r);
      reader += g.win;
      aborted += g.aborted;
    }
    const bool wi = config.zap->witness_indistinguishable();
    emit(rate_line("ring-anon", "random-guess", runs, guess, 0, 0.5));
    json j = rate_line("ring-anon", "witness-reader", runs, reader, aborted, wi ? 0.5 : 1.0);
    j["witness_indistinguishable"] = wi;
    emit(j);
    return 0;
  }
  if (o.game == "equiv") {
    const std::size_t runs = o.runs ? o.runs : 1000;
    std::optional<Epsilon> override_eps;
    if (o.epsilon != "1/p") override_eps = eps;
    for (Direction d : {Direction::kNecessity, Direction::kSufficiency}) {
      const EquivalenceStats s = equivalence_experiment(d, o.p, runs, base, override_eps);
      emit({{"game", "equiv"},
            {"direction", d == Direction::kNecessity ? "necessity" : "sufficiency"},
            {"p", s.p},
            {"runs", s.runs},
            {"epsilon", s.epsilon},
            {"measured", s.measured},
            {"predicted", s.predicted}});
    }
    return 0;
  }
  throw UsageError("unknown game '" + o.game + "'; expected bu, ring-euf, ring-bu, ring-anon or equiv");
}

int run(int argc, char** argv) {
  CLI::App app{"Lattice blind-unforgeable and ring signatures"};
  app.require_subcommand(1);
  Options o;
  auto seed_opt = [&](CLI::App* c) { c->add_option("--seed", o.seed, "Deterministic seed"); };
  auto scheme_opts = [&](CLI::App* c) {
    c->add_option("--scheme", o.scheme, "gpv or plain")->check(CLI::IsMember({"gpv", "plain"}));
    c->add_option("--n", o.n, "Lattice dimension")->check(CLI::PositiveNumber);
    c->add_option("--q", o.q, "GPV modulus");
    c->add_option("--m", o.m, "GPV width; 0 picks the minimum");
    c->add_option("--t", o.t, "Plain scheme message bits")->check(CLI::PositiveNumber);
    c->add_option("--epsilon", o.epsilon, "Plain scheme PRF bias, a/b or decimal");
  };

  CLI::App* keygen = app.add_subcommand("keygen", "Generate a key pair");
  scheme_opts(keygen);
  seed_opt(keygen);
  keygen->add_option("--out", o.out, "Output directory for vk.bin and sk.bin")->required();
  keygen->add_option("--format", o.format, "binary, or json to also describe the key")
      ->check(CLI::IsMember({"binary", "json"}));

  CLI::App* sign = app.add_subcommand("sign", "Sign a message file");
  seed_opt(sign);
  sign->add_option("--scheme", o.scheme, "gpv or plain")->check(CLI::IsMember({"gpv", "plain"}));
  sign->add_option("--sk", o.sk, "Secret key file")->required();
  sign->add_option("--vk", o.vk, "Verification key file")->required();
  sign->add_option("--msg", o.msg, "Message file")->required();
  sign->add_option("--out", o.out, "Signature output file")->required();

  CLI::App* verify = app.add_subcommand("verify", "Verify a signature; exit 1 if invalid");
  verify->add_option("--scheme", o.scheme, "gpv or plain")->check(CLI::IsMember({"gpv", "plain"}));
  verify->add_option("--vk", o.vk, "Verification key file")->required();
  verify->add_option("--msg", o.msg, "Message file")->required();
  verify->add_option("--sig", o.sig, "Signature file")->required();

  CLI::App* params = app.add_subcommand("params", "Report the plain scheme's parameter constraints");
  params->add_option("--n", o.n, "Lattice dimension")->check(CLI::PositiveNumber);
  params->add_option("--t", o.t, "Message bits")->check(CLI::PositiveNumber);
  params->add_option("--epsilon", o.epsilon, "PRF bias, default 3/4");
  params->add_option("--format", o.format, "binary (text report) or json")->check(CLI::IsMember({"binary", "json"}));

  CLI::App* describe_cmd = app.add_subcommand("describe", "Print artifact metadata as JSON");
  describe_cmd->add_option("--in", o.in, "Artifact file")->required();

  CLI::App* game = app.add_subcommand("game", "Run a security game and print JSON lines");
  game->add_option("name", o.game, "bu, ring-euf, ring-bu, ring-anon or equiv")->required();
  seed_opt(game);
  game->add_option("--epsilon", o.epsilon, "Blind set weight, default 1/2; 1/p for equiv");
  game->add_option("--runs", o.runs, "Number of games");
  game->add_option("--keys", o.keys, "Key count Q in ring games")->check(CLI::Range(2, 64));
  game->add_option("--p", o.p, "Query budget for equiv")->check(CLI::Range(2, 1 << 20));
  game->add_option("--scheme", o.scheme, "Base scheme for bu")->check(CLI::IsMember({"gpv", "plain"}));

  CLI::App* ring = app.add_subcommand("ring", "Ring signatures");
  ring->require_subcommand(1);
  CLI::App* ring_keygen = ring->add_subcommand("keygen", "Write NAME.rsvk and NAME.rssk");
  seed_opt(ring_keygen);
  std::string name = "key";
  ring_keygen->add_option("--out", o.out, "Output directory")->required();
  ring_keygen->add_option("--name", name, "File stem");
  CLI::App* ring_sign = ring->add_subcommand("sign", "Sign for the ring in a directory of .rsvk files");
  seed_opt(ring_sign);
  ring_sign->add_option("--sk", o.sk, "RSSK file")->required();
  ring_sign->add_option("--ring", o.ring, "Ring directory")->required();
  ring_sign->add_option("--msg", o.msg, "Message file")->required();
  ring_sign->add_option("--out", o.out, "Signature output file")->required();
  CLI::App* ring_verify = ring->add_subcommand("verify", "Verify a ring signature; exit 1 if invalid");
  ring_verify->add_option("--ring", o.ring, "Ring directory")->required();
  ring_verify->add_option("--msg", o.msg, "Message file")->required();
  ring_verify->add_option("--sig", o.sig, "Signature file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (o.epsilon.empty()) o.epsilon = *game ? (o.game == "equiv" ? "1/p" : "1/2") : "3/4";

  if (*keygen) {
    const auto scheme = make_scheme(o.scheme, o.n, o.q, o.m, o.t, o.epsilon);
    RandomStream rng = stream_for(o.seed, "keygen");
    auto [vk, sk] = scheme->gen(rng);
    write_file(fs::path(o.out) / "vk.bin", vk);
    write_file(fs::path(o.out) / "sk.bin", sk);
    if (o.format == "json") std::cout << describe(vk).dump(2) << '\n';
    return 0;
  }
  if (*sign) {
    const Bytes sk = read_file(o.sk), vk = read_file(o.vk), msg = read_file(o.msg);
    RandomStream rng = stream_for(o.seed, "sign");
    write_file(o.out, scheme_for(parse_scheme_name(o.scheme))->sign(sk, vk, msg, rng));
    return 0;
  }
  if (*verify) {
    const Bytes vk = read_file(o.vk), msg = read_file(o.msg), sig = read_file(o.sig);
    const bool ok = base_verify(parse_scheme_name(o.scheme), vk, msg, sig);
    std::cout << (ok ? "valid" : "invalid") << '\n';
    return ok ? 0 : 1;
  }
  if (*params) {
    const PlainParams p = plain_params_for(o.n, o.t, parse_epsilon(o.epsilon));
    if (o.format == "json") {
      json j = describe_plain_params(p);
      j["report"] = p.report;
      std::cout << j.dump(2) << '\n';
    } else {
      for (const auto& line : p.report) std::cout << line << '\n';
    }
    return 0;
  }
  if (*describe_cmd) {
    std::cout << describe(read_file(o.in)).dump(2) << '\n';
    return 0;
  }
  if (*game) {
    return run_game(o);
  }
  if (*ring_keygen) {
    const RingKeyPair kp = rs_gen_from(RingParams{}, stream_for(o.seed, "ring.keygen").bytes(32));
    write_file(fs::path(o.out) / (name + ".rsvk"), serialize(kp.vk));
    write_file(fs::path(o.out) / (name + ".rssk"), serialize(kp.sk));
    return 0;
  }
  if (*ring_sign) {
    const RingSecretKey sk = parse_ring_sk(read_file(o.sk));
    const Ring members = read_ring_dir(o.ring);
    RandomStream rng = stream_for(o.seed, "ring.sign");
    write_file(o.out, serialize(rs_sign(sk, members, read_file(o.msg), rng)));
    return 0;
  }
  if (*ring_verify) {
    const Ring members = read_ring_dir(o.ring);
    const Bytes msg = read_file(o.msg), data = read_file(o.sig);
    bool ok = false;
    try {
      ok = rs_verify(members, msg, parse_ring_signature(data));
    } catch (const std::exception&) {
      ok = false;
    }
    std::cout << (ok ? "valid" : "invalid") << '\n';
    return ok ? 0 : 1;
  }
  throw UsageError("no command given");
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const SignerNotInRing& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const FormatError& e) {
    std::cerr << "error: corrupted or unsupported file: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
