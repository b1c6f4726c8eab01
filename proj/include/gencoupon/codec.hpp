#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gencoupon/field.hpp"
#include "gencoupon/random.hpp"

namespace gencoupon {

using SymbolMatrix = Eigen::Matrix<Symbol, Eigen::Dynamic, Eigen::Dynamic>;
using SymbolRowMatrix = Eigen::Matrix<Symbol, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using SymbolVector = Eigen::Matrix<Symbol, Eigen::Dynamic, 1>;

/// N information packets of d symbols each, split into n = N / h generations of h packets.
class GenerationConfig {
 public:
  /// Throws ConfigError unless N = n h with h, d >= 1.
  GenerationConfig(std::size_t total_packets, std::size_t generation_size, std::size_t symbols_per_packet,
                   Field field);

  std::size_t total_packets() const noexcept { return total_packets_; }
  std::size_t generation_size() const noexcept { return generation_size_; }
  std::size_t generations() const noexcept { return total_packets_ / generation_size_; }
  std::size_t symbols_per_packet() const noexcept { return symbols_per_packet_; }
  const Field& field() const noexcept { return field_; }

 private:
  std::size_t total_packets_;
  std::size_t generation_size_;
  std::size_t symbols_per_packet_;
  Field field_;
};

/// d x N matrix whose column i is packet p_{i+1}.
class SourceBlock {
 public:
  SourceBlock(SymbolMatrix packets, std::size_t generation_size)
      : packets_(std::move(packets)), generation_size_(generation_size) {}

  const SymbolMatrix& packets() const noexcept { return packets_; }
  std::size_t generation_size() const noexcept { return generation_size_; }

  /// d x h view of generation j (1-based).
  auto generation(std::size_t j) const {
    return packets_.middleCols(static_cast<Eigen::Index>((j - 1) * generation_size_),
                               static_cast<Eigen::Index>(generation_size_));
  }

 private:
  SymbolMatrix packets_;
  std::size_t generation_size_;
};

/// Split N * d symbols (packet after packet) into the generation layout.
/// Throws SizeError on a length mismatch and ContractError on out-of-field symbols.
SourceBlock partition(std::span<const Symbol> symbols, const GenerationConfig& config);

/// Source of uniformly random symbols.
SourceBlock random_source(const GenerationConfig& config, Rng& rng);

struct CodedPacket {
  std::size_t generation = 0;  // 1-based
  SymbolVector coding;         // length h
  SymbolVector payload;        // length d; empty when payloads are not carried
};

/// Combine the packets of generation j by `coding`.
CodedPacket encode(const SourceBlock& source, const GenerationConfig& config, std::size_t generation,
                   const SymbolVector& coding);

/// Uniform generation, uniform coding vector (the zero vector included).
CodedPacket encode_next(const SourceBlock& source, const GenerationConfig& config, Rng& rng);

struct InnovationReport {
  bool innovative = false;
  bool generation_complete = false;
  std::size_t rank = 0;
};

/// Receiver state: one incrementally row-reduced system per generation.
///
/// With payloads carried, each generation is kept in reduced row echelon form
/// so a full-rank generation decodes by reading off its rows. In dof-only mode
/// only the echelon form of the coding vectors is kept.
class Decoder {
 public:
  explicit Decoder(const GenerationConfig& config, bool carry_payload = true);

  /// Throws SizeError when the packet does not match the configuration.
  InnovationReport absorb(const CodedPacket& packet);
  InnovationReport absorb(std::size_t generation, std::span<const Symbol> coding,
                          std::span<const Symbol> payload = {});

  std::size_t rank(std::size_t generation) const { return systems_.at(generation - 1).rank; }
  bool generation_complete(std::size_t generation) const { return rank(generation) == h_; }
  bool complete() const noexcept { return completed_ == systems_.size(); }
  std::size_t packets_absorbed() const noexcept { return absorbed_; }
  bool carries_payload() const noexcept { return carry_payload_; }

  /// Stored coding rows of generation j (rank x h), for inspection.
  SymbolRowMatrix coding_rows(std::size_t generation) const;

  /// The d x h original packets of generation j. Throws NotDecodableError below full rank.
  SymbolMatrix decode_generation(std::size_t generation) const;

 private:
  struct System {
    SymbolRowMatrix coding;   // h x h, first `rank` rows used
    SymbolRowMatrix payload;  // h x d
    std::vector<int> row_of_pivot;
    std::size_t rank = 0;
  };

  Field field_;
  std::size_t h_;
  std::size_t d_;
  bool carry_payload_;
  std::vector<System> systems_;
  std::vector<Symbol> scratch_coding_;
  std::vector<Symbol> scratch_payload_;
  std::size_t absorbed_ = 0;
  std::size_t completed_ = 0;
};

struct TrialRecord {
  std::uint64_t seed = 0;
  std::size_t total = 0;                      // T
  std::vector<std::size_t> per_generation;    // N_1 .. N_n
  bool decoded_ok = true;                     // full-payload trials only
};

/// Encode and absorb until the whole file decodes, carrying no payloads.
TrialRecord run_trial(const GenerationConfig& config, Rng& rng);

/// Same draw sequence as the dof-only overload, with payloads carried and the
/// decoded generations compared to `source`.
TrialRecord run_trial(const GenerationConfig& config, const SourceBlock& source, Rng& rng);

std::string trial_csv_header(const GenerationConfig& config);
/// seed, N, h, n, q, d, T, N_1..N_n
std::string to_csv_row(const TrialRecord& record, const GenerationConfig& config);

}  // namespace gencoupon
