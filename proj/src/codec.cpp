#include "gencoupon/codec.hpp"

#include <algorithm>

#include "gencoupon/errors.hpp"

namespace gencoupon {

GenerationConfig::GenerationConfig(std::size_t total_packets, std::size_t generation_size,
                                   std::size_t symbols_per_packet, Field field)
    : total_packets_(total_packets),
      generation_size_(generation_size),
      symbols_per_packet_(symbols_per_packet),
      field_(std::move(field)) {
  if (generation_size_ == 0) throw ConfigError("generation size h must be >= 1");
  if (symbols_per_packet_ == 0) throw ConfigError("symbols per packet d must be >= 1");
  if (total_packets_ == 0) throw ConfigError("total packets N must be >= 1");
  if (total_packets_ % generation_size_ != 0)
    throw ConfigError("N = " + std::to_string(total_packets_) + " is not divisible by h = " +
                      std::to_string(generation_size_));
}

SourceBlock partition(std::span<const Symbol> symbols, const GenerationConfig& config) {
  const std::size_t n_packets = config.total_packets();
  const std::size_t d = config.symbols_per_packet();
  if (symbols.size() != n_packets * d)
    throw SizeError("source has " + std::to_string(symbols.size()) + " symbols, expected N*d = " +
                    std::to_string(n_packets * d));
  const auto q = config.field().order();
  if (std::any_of(symbols.begin(), symbols.end(), [q](Symbol s) { return s >= q; }))
    throw ContractError("source symbol outside GF(" + std::to_string(q) + ")");
  SymbolMatrix packets = Eigen::Map<const SymbolMatrix>(symbols.data(), static_cast<Eigen::Index>(d),
                                                        static_cast<Eigen::Index>(n_packets));
  return SourceBlock(std::move(packets), config.generation_size());
}

SourceBlock random_source(const GenerationConfig& config, Rng& rng) {
  std::vector<Symbol> symbols(config.total_packets() * config.symbols_per_packet());
  for (auto& s : symbols) s = config.field().random_symbol(rng);
  return partition(symbols, config);
}

CodedPacket encode(const SourceBlock& source, const GenerationConfig& config, std::size_t generation,
                   const SymbolVector& coding) {
  const std::size_t h = config.generation_size();
  if (generation < 1 || generation > config.generations())
    throw SizeError("generation index " + std::to_string(generation) + " out of range");
  if (static_cast<std::size_t>(coding.size()) != h)
    throw SizeError("coding vector length " + std::to_string(coding.size()) + ", expected " +
                    std::to_string(h));
  const Field& field = config.field();
  const auto g = source.generation(generation);
  SymbolVector payload = SymbolVector::Zero(g.rows());
  std::vector<Symbol> column(static_cast<std::size_t>(g.rows()));
  for (std::size_t c = 0; c < h; ++c) {
    const auto col = g.col(static_cast<Eigen::Index>(c));
    std::copy(col.data(), col.data() + col.size(), column.begin());
    field.axpy(std::span<Symbol>(payload.data(), column.size()), coding[static_cast<Eigen::Index>(c)],
               column);
  }
  return {generation, coding, std::move(payload)};
}

namespace {

std::size_t draw_coding(const GenerationConfig& config, Rng& rng, std::span<Symbol> coding) {
  const std::size_t j = 1 + static_cast<std::size_t>(uniform_below(rng, config.generations()));
  for (auto& s : coding) s = config.field().random_symbol(rng);
  return j;
}

}  // namespace

CodedPacket encode_next(const SourceBlock& source, const GenerationConfig& config, Rng& rng) {
  SymbolVector coding(static_cast<Eigen::Index>(config.generation_size()));
  const std::size_t j = draw_coding(config, rng, std::span<Symbol>(coding.data(), config.generation_size()));
  return encode(source, config, j, coding);
}

Decoder::Decoder(const GenerationConfig& config, bool carry_payload)
    : field_(config.field()),
      h_(config.generation_size()),
      d_(config.symbols_per_packet()),
      carry_payload_(carry_payload),
      systems_(config.generations()),
      scratch_coding_(h_),
      scratch_payload_(carry_payload ? d_ : 0) {
  const auto h = static_cast<Eigen::Index>(h_);
  for (auto& sys : systems_) {
    sys.coding = SymbolRowMatrix::Zero(h, h);
    if (carry_payload_) sys.payload = SymbolRowMatrix::Zero(h, static_cast<Eigen::Index>(d_));
    sys.row_of_pivot.assign(h_, -1);
  }
}

InnovationReport Decoder::absorb(const CodedPacket& packet) {
  return absorb(packet.generation, std::span<const Symbol>(packet.coding.data(), packet.coding.size()),
                std::span<const Symbol>(packet.payload.data(), packet.payload.size()));
}

InnovationReport Decoder::absorb(std::size_t generation, std::span<const Symbol> coding,
                                 std::span<const Symbol> payload) {
  if (generation < 1 || generation > systems_.size())
    throw SizeError("generation index " + std::to_string(generation) + " out of range");
  if (coding.size() != h_)
    throw SizeError("coding vector length " + std::to_string(coding.size()) + ", expected " +
                    std::to_string(h_));
  if (carry_payload_ && payload.size() != d_)
    throw SizeError("payload length " + std::to_string(payload.size()) + ", expected " + std::to_string(d_));

  System& sys = systems_[generation - 1];
  ++absorbed_;
  if (sys.rank == h_) return {false, true, h_};

  std::span<Symbol> v(scratch_coding_);
  std::span<Symbol> pv(scratch_payload_);
  std::copy(coding.begin(), coding.end(), v.begin());
  if (carry_payload_) std::copy(payload.begin(), payload.end(), pv.begin());

  auto coding_row = [&](int r) { return std::span<Symbol>(sys.coding.row(r).data(), h_); };
  auto payload_row = [&](int r) { return std::span<Symbol>(sys.payload.row(r).data(), d_); };

  // Clear every pivot column of v; remember the first remaining nonzero.
  int new_pivot = -1;
  for (std::size_t c = 0; c < h_; ++c) {
    if (v[c] == 0) continue;
    const int r = sys.row_of_pivot[c];
    if (r < 0) {
      if (new_pivot < 0) new_pivot = static_cast<int>(c);
      if (!carry_payload_) break;  // echelon form suffices without decoding
      continue;
    }
    const Symbol coef = field_.neg(v[c]);
    field_.axpy(v.subspan(c), coef, coding_row(r).subspan(c));
    if (carry_payload_) field_.axpy(pv, coef, payload_row(r));
  }
  if (new_pivot < 0) return {false, false, sys.rank};

  const auto p = static_cast<std::size_t>(new_pivot);
  const Symbol scale = field_.inv(v[p]);
  field_.scale(v, scale);
  if (carry_payload_) {
    field_.scale(pv, scale);
    // Back-substitute the new pivot out of the existing rows.
    for (std::size_t r = 0; r < sys.rank; ++r) {
      auto row = coding_row(static_cast<int>(r));
      if (row[p] == 0) continue;
      const Symbol coef = field_.neg(row[p]);
      field_.axpy(row, coef, v);
      field_.axpy(payload_row(static_cast<int>(r)), coef, pv);
    }
    std::copy(pv.begin(), pv.end(), payload_row(static_cast<int>(sys.rank)).begin());
  }
  std::copy(v.begin(), v.end(), coding_row(static_cast<int>(sys.rank)).begin());
  sys.row_of_pivot[p] = static_cast<int>(sys.rank);
  ++sys.rank;
  const bool done = sys.rank == h_;
  if (done) ++completed_;
  return {true, done, sys.rank};
}

SymbolRowMatrix Decoder::coding_rows(std::size_t generation) const {
  const System& sys = systems_.at(generation - 1);
  return sys.coding.topRows(static_cast<Eigen::Index>(sys.rank));
}

SymbolMatrix Decoder::decode_generation(std::size_t generation) const {
  if (generation < 1 || generation > systems_.size())
    throw SizeError("generation index " + std::to_string(generation) + " out of range");
  const System& sys = systems_[generation - 1];
  if (sys.rank < h_)
    throw NotDecodableError("generation " + std::to_string(generation) + " has rank " +
                            std::to_string(sys.rank) + " < h = " + std::to_string(h_));
  if (!carry_payload_) throw ContractError("decoder was created without payloads");
  // Full-rank reduced echelon form is a row permutation of the identity.
  SymbolMatrix out(static_cast<Eigen::Index>(d_), static_cast<Eigen::Index>(h_));
  for (std::size_t c = 0; c < h_; ++c)
    out.col(static_cast<Eigen::Index>(c)) = sys.payload.row(sys.row_of_pivot[c]).transpose();
  return out;
}

TrialRecord run_trial(const GenerationConfig& config, Rng& rng) {
  Decoder decoder(config, false);
  TrialRecord record;
  record.per_generation.assign(config.generations(), 0);
  std::vector<std::size_t> drawn(config.generations(), 0);
  std::vector<Symbol> coding(config.generation_size());
  while (!decoder.complete()) {
    const std::size_t j = draw_coding(config, rng, coding);
    ++drawn[j - 1];
    const auto report = decoder.absorb(j, coding);
    if (report.innovative && report.generation_complete) record.per_generation[j - 1] = drawn[j - 1];
  }
  record.total = decoder.packets_absorbed();
  return record;
}

TrialRecord run_trial(const GenerationConfig& config, const SourceBlock& source, Rng& rng) {
  Decoder decoder(config, true);
  TrialRecord record;
  record.per_generation.assign(config.generations(), 0);
  std::vector<std::size_t> drawn(config.generations(), 0);
  SymbolVector coding(static_cast<Eigen::Index>(config.generation_size()));
  while (!decoder.complete()) {
    const std::size_t j =
        draw_coding(config, rng, std::span<Symbol>(coding.data(), config.generation_size()));
    ++drawn[j - 1];
    const auto report = decoder.absorb(encode(source, config, j, coding));
    if (report.innovative && report.generation_complete) record.per_generation[j - 1] = drawn[j - 1];
  }
  record.total = decoder.packets_absorbed();
  for (std::size_t j = 1; j <= config.generations(); ++j)
    if (decoder.decode_generation(j) != source.generation(j)) record.decoded_ok = false;
  return record;
}

std::string trial_csv_header(const GenerationConfig& config) {
  std::string out = "seed,N,h,n,q,d,T";
  for (std::size_t j = 1; j <= config.generations(); ++j) out += ",N_" + std::to_string(j);
  return out;
}

std::string to_csv_row(const TrialRecord& record, const GenerationConfig& config) {
  std::string out = std::to_string(record.seed) + ',' + std::to_string(config.total_packets()) + ',' +
                    std::to_string(config.generation_size()) + ',' + std::to_string(config.generations()) +
                    ',' + std::to_string(config.field().order()) + ',' +
                    std::to_string(config.symbols_per_packet()) + ',' + std::to_string(record.total);
  for (auto n_i : record.per_generation) out += ',' + std::to_string(n_i);
  return out;
}

}  // namespace gencoupon
