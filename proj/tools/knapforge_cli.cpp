// Command-line front end over the knapforge C API.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "knapforge.h"

namespace {

constexpr int kExitUsage = 2;   // parse / parameter errors
constexpr int kExitFailed = 3;  // decode or attack failure under --strict

struct KeyDeleter {
  void operator()(kf_key* k) const { kf_key_free(k); }
};
using KeyPtr = std::unique_ptr<kf_key, KeyDeleter>;

struct BufDeleter {
  void operator()(void* p) const { kf_buffer_free(p); }
};
using TextPtr = std::unique_ptr<char, BufDeleter>;
using BytePtr = std::unique_ptr<uint8_t, BufDeleter>;

[[noreturn]] void die(kf_status status) {
  std::cerr << "error: " << kf_status_str(status) << ": " << kf_last_error()
            << "\n";
  std::exit(kExitUsage);
}

void check(kf_status status) {
  if (status != KF_OK) die(status);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot open " << path << "\n";
    std::exit(kExitUsage);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const char* data, std::size_t size) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !out.write(data, static_cast<std::streamsize>(size))) {
    std::cerr << "error: cannot write " << path << "\n";
    std::exit(kExitUsage);
  }
}

KeyPtr load_key(const std::string& path) {
  std::string text = read_file(path);
  kf_key* key = nullptr;
  check(kf_key_parse(text.c_str(), &key));
  return KeyPtr(key);
}

// Accepts plain decimals plus the shorthands 2^k, 10^k and NeK.
std::string expand_int(const std::string& raw) {
  auto power = [](unsigned base, unsigned exp) {
    std::string v = "1";
    for (unsigned i = 0; i < exp; ++i) {
      int carry = 0;
      for (auto it = v.rbegin(); it != v.rend(); ++it) {
        int d = (*it - '0') * static_cast<int>(base) + carry;
        *it = static_cast<char>('0' + d % 10);
        carry = d / 10;
      }
      while (carry) {
        v.insert(v.begin(), static_cast<char>('0' + carry % 10));
        carry /= 10;
      }
    }
    return v;
  };
  std::size_t caret = raw.find('^');
  if (caret != std::string::npos)
    return power(static_cast<unsigned>(std::stoul(raw.substr(0, caret))),
                 static_cast<unsigned>(std::stoul(raw.substr(caret + 1))));
  std::size_t e = raw.find_first_of("eE");
  if (e != std::string::npos) {
    std::string mant = raw.substr(0, e);
    unsigned exp = static_cast<unsigned>(std::stoul(raw.substr(e + 1)));
    return mant + std::string(exp, '0');
  }
  return raw;
}

std::string expand_list(const std::string& csv) {
  std::stringstream ss(csv);
  std::string tok, out;
  while (std::getline(ss, tok, ',')) {
    if (!out.empty()) out += ',';
    out += expand_int(tok);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"knapforge: bounded-knapsack cryptosystems and cryptanalysis"};
  app.require_subcommand(1);
  app.fallthrough();  // --seed/--strict may appear after the subcommand

  std::uint64_t seed = 1;
  bool strict = false;
  app.add_option("--seed", seed, "random seed (default 1)");
  app.add_flag("--strict", strict, "exit 3 on decode or attack failure");

  // keygen
  auto* keygen = app.add_subcommand("keygen", "generate a key pair");
  int system = 1, variant = 1;
  std::uint32_t s = 0, alphabet = 2;
  std::string p_raw, out_prefix;
  keygen->add_option("--system", system, "cryptosystem 1, 2 or 3")->required();
  keygen->add_option("--variant", variant, "parameter variant 1 or 2");
  keygen->add_option("--s", s, "dimension")->required();
  keygen->add_option("--p", p_raw, "base parameter p (decimal, 10^k or NeK)")
      ->required();
  keygen->add_option("--M", alphabet, "alphabet bound (default 2)");
  keygen->add_option("--out", out_prefix,
                     "output prefix; writes <prefix>.pub and <prefix>.priv")
      ->required();

  // encrypt / decrypt
  auto* enc = app.add_subcommand("encrypt", "encrypt a byte stream");
  std::string key_path, in_path, out_path;
  enc->add_option("--key", key_path, "public (or private) key file")
      ->required();
  enc->add_option("--in", in_path, "plaintext input file")->required();
  enc->add_option("--out", out_path, "ciphertext output file")->required();

  auto* dec = app.add_subcommand("decrypt", "decrypt a ciphertext file");
  std::string dkey_path, din_path, dout_path;
  dec->add_option("--key", dkey_path, "private key file")->required();
  dec->add_option("--in", din_path, "ciphertext input file")->required();
  dec->add_option("--out", dout_path, "plaintext output file")->required();

  // density
  auto* dens = app.add_subcommand("density", "knapsack density of a key");
  std::string density_key;
  dens->add_option("--key", density_key, "key file")->required();

  // pseudokeys
  auto* pseudo = app.add_subcommand("pseudokeys", "enumerate pseudo-keys");
  std::string pseudo_key, qmax_raw;
  pseudo->add_option("--key", pseudo_key, "key file")->required();
  pseudo->add_option("--qmax", qmax_raw,
                     "search bound (default: largest key entry)");

  // experiment
  auto* experiment =
      app.add_subcommand("experiment", "reproduce the analysis experiments");
  experiment->require_subcommand(1);

  auto* uniq = experiment->add_subcommand(
      "uniqueness", "pseudo-key uniqueness percentages");
  std::uint32_t u_s = 8, u_trials = 1000;
  std::uint64_t u_plo = 40, u_phi = 55;
  uniq->add_option("--s", u_s, "dimension")->required();
  uniq->add_option("--plo", u_plo, "open interval lower end")->required();
  uniq->add_option("--phi", u_phi, "open interval upper end")->required();
  uniq->add_option("--trials", u_trials, "number of trials (default 1000)");

  auto* restsum = experiment->add_subcommand(
      "restsum", "probability that s uniform rests sum below q");
  std::string r_q;
  std::uint32_t r_s = 2, r_trials = 10000;
  std::string r_mode = "exact";
  restsum->add_option("--q", r_q, "modulus q")->required();
  restsum->add_option("--s", r_s, "number of rests")->required();
  restsum->add_option("--mode", r_mode, "exact or montecarlo");
  restsum->add_option("--trials", r_trials, "monte carlo trials");

  auto* countsi = experiment->add_subcommand(
      "count-si", "count superincreasing sequences of a given sum");
  std::uint32_t c_s = 3;
  std::string c_t;
  countsi->add_option("--s", c_s, "sequence length")->required();
  countsi->add_option("--t", c_t, "sequence sum")->required();

  auto* stability = experiment->add_subcommand(
      "stability", "lattice attack stability under key shifts");
  std::string stab_spec;
  std::uint32_t stab_samples = 100;
  stability->add_option("--spec", stab_spec, "parameter file")->required();
  stability->add_option("--samples", stab_samples,
                        "perturbation samples (default 100)");

  // attack
  auto* attack = app.add_subcommand("attack", "lattice attack on a ciphertext");
  std::string a_key, a_ct, a_method = "lll1";
  attack->add_option("--key", a_key, "public key file")->required();
  attack->add_option("--ct", a_ct, "ciphertext (decimal)")->required();
  attack->add_option("--method", a_method, "lll1 or lll2");

  // reduce
  auto* reduce =
      app.add_subcommand("reduce", "factor n via the Problem-4 reduction");
  std::string n_raw;
  std::uint32_t red_s = 3;
  double eta = 0.05;
  reduce->add_option("--n", n_raw, "number to factor")->required();
  reduce->add_option("--s", red_s, "instance dimension (default 3)");
  reduce->add_option("--eta", eta, "failure budget (default 0.05)");

  // bench
  auto* bench = app.add_subcommand("bench", "timing / size tables");
  std::string b_metric = "key_size", b_slist, b_plist;
  int b_system = 1, b_variant = 1;
  std::uint32_t b_trials = 5;
  bench->add_option("--metric", b_metric,
                    "encrypt_time, decrypt_time, keygen_time or key_size");
  bench->add_option("--system", b_system, "cryptosystem");
  bench->add_option("--variant", b_variant, "variant");
  bench->add_option("--s-list", b_slist, "comma-separated s values")
      ->required();
  bench->add_option("--p-list", b_plist, "comma-separated p values")
      ->required();
  bench->add_option("--trials", b_trials, "timing trials (default 5)");

  CLI11_PARSE(app, argc, argv);

  if (keygen->parsed()) {
    kf_key* pub = nullptr;
    kf_key* priv = nullptr;
    check(kf_keygen(system, variant, s, expand_int(p_raw).c_str(), alphabet,
                    seed, &pub, &priv));
    KeyPtr pub_owner(pub), priv_owner(priv);
    char* text = nullptr;
    check(kf_key_serialize(pub, &text));
    TextPtr pub_text(text);
    write_file(out_prefix + ".pub", pub_text.get(),
               std::string(pub_text.get()).size());
    check(kf_key_serialize(priv, &text));
    TextPtr priv_text(text);
    write_file(out_prefix + ".priv", priv_text.get(),
               std::string(priv_text.get()).size());
    std::cout << "wrote " << out_prefix << ".pub and " << out_prefix
              << ".priv\n";
    return 0;
  }

  if (enc->parsed()) {
    KeyPtr key = load_key(key_path);
    std::string data = read_file(in_path);
    char* text = nullptr;
    check(kf_encrypt_bytes(key.get(),
                           reinterpret_cast<const uint8_t*>(data.data()),
                           data.size(), &text));
    TextPtr owner(text);
    write_file(out_path, owner.get(), std::string(owner.get()).size());
    return 0;
  }

  if (dec->parsed()) {
    KeyPtr key = load_key(dkey_path);
    std::string text = read_file(din_path);
    uint8_t* data = nullptr;
    std::size_t size = 0;
    kf_status st = kf_decrypt_bytes(key.get(), text.c_str(), &data, &size);
    if (st == KF_ERR_DECODE) {
      std::cerr << "error: " << kf_last_error() << "\n";
      return strict ? kExitFailed : 0;
    }
    check(st);
    BytePtr owner(data);
    write_file(dout_path, reinterpret_cast<const char*>(owner.get()), size);
    return 0;
  }

  if (dens->parsed()) {
    KeyPtr key = load_key(density_key);
    double value = 0;
    check(kf_density(key.get(), &value));
    std::printf("density=%.12g\n", value);
    return 0;
  }

  if (pseudo->parsed()) {
    KeyPtr key = load_key(pseudo_key);
    char* report = nullptr;
    check(kf_pseudokeys(key.get(),
                        qmax_raw.empty() ? nullptr
                                         : expand_int(qmax_raw).c_str(),
                        &report));
    TextPtr owner(report);
    std::fputs(owner.get(), stdout);
    return 0;
  }

  if (uniq->parsed()) {
    double fraction = 0;
    char* report = nullptr;
    check(kf_experiment_uniqueness(u_s, u_plo, u_phi, u_trials, seed,
                                   &fraction, &report));
    TextPtr owner(report);
    std::fputs(owner.get(), stdout);
    return 0;
  }

  if (restsum->parsed()) {
    char* report = nullptr;
    int mc = r_mode == "montecarlo" ? 1 : 0;
    if (!mc && r_mode != "exact") {
      std::cerr << "error: --mode must be exact or montecarlo\n";
      return kExitUsage;
    }
    check(kf_experiment_restsum(expand_int(r_q).c_str(), r_s, mc, r_trials,
                                seed, &report));
    TextPtr owner(report);
    std::fputs(owner.get(), stdout);
    return 0;
  }

  if (countsi->parsed()) {
    char* report = nullptr;
    check(kf_experiment_count_si(c_s, expand_int(c_t).c_str(), &report));
    TextPtr owner(report);
    std::fputs(owner.get(), stdout);
    return 0;
  }

  if (stability->parsed()) {
    std::string spec = read_file(stab_spec);
    char* table = nullptr;
    check(kf_experiment_stability(spec.c_str(), stab_samples, seed, &table));
    TextPtr owner(table);
    std::fputs(owner.get(), stdout);
    return 0;
  }

  if (attack->parsed()) {
    KeyPtr key = load_key(a_key);
    int method;
    if (a_method == "lll1")
      method = 1;
    else if (a_method == "lll2")
      method = 2;
    else {
      std::cerr << "error: --method must be lll1 or lll2\n";
      return kExitUsage;
    }
    int recovered = 0;
    char* outcome = nullptr;
    check(kf_attack(key.get(), expand_int(a_ct).c_str(), method, seed,
                    &recovered, &outcome));
    TextPtr owner(outcome);
    std::fputs(owner.get(), stdout);
    if (!recovered && strict) return kExitFailed;
    return 0;
  }

  if (reduce->parsed()) {
    int found = 0;
    char* report = nullptr;
    check(kf_reduce(expand_int(n_raw).c_str(), red_s, eta, seed, &found,
                    &report));
    TextPtr owner(report);
    std::fputs(owner.get(), stdout);
    if (!found && strict) return kExitFailed;
    return 0;
  }

  if (bench->parsed()) {
    char* table = nullptr;
    check(kf_bench(b_metric.c_str(), b_system, b_variant,
                   expand_list(b_slist).c_str(), expand_list(b_plist).c_str(),
                   b_trials, seed, &table));
    TextPtr owner(table);
    std::fputs(owner.get(), stdout);
    return 0;
  }

  return kExitUsage;
}
