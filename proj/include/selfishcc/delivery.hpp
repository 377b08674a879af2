#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "selfishcc/demands.hpp"
#include "selfishcc/placement.hpp"

namespace selfishcc {

/// One multicast transmission: the GF(2) sum of a set of subfiles. Parts are
/// kept sorted in canonical order; duplicate parts cancel and are rejected.
struct XorMessage {
  std::vector<SubfileId> parts;

  XorMessage() = default;
  explicit XorMessage(std::vector<SubfileId> p) : parts(std::move(p)) { normalize(); }

  void normalize() {
    std::sort(parts.begin(), parts.end());
    if (std::adjacent_find(parts.begin(), parts.end()) != parts.end())
      throw std::invalid_argument("XOR message with a repeated subfile");
    if (parts.empty()) throw std::invalid_argument("empty XOR message");
  }

  friend bool operator==(const XorMessage&, const XorMessage&) = default;
};

/// An ordered list of XOR transmissions over one placement's subfile space.
/// With equal piece sizes the load is simply messages / subpacketization.
struct DeliveryScheme {
  std::vector<XorMessage> messages;
  std::int64_t subpacketization = 1;

  [[nodiscard]] Rational load() const {
    return {static_cast<std::int64_t>(messages.size()), subpacketization};
  }

  friend bool operator==(const DeliveryScheme&, const DeliveryScheme&) = default;
};

/// How one desired subfile is recovered: XOR the listed messages (0-based
/// indices), cancel cached parts, and the desired subfile remains.
struct DecodeCertificate {
  SubfileId subfile;
  std::vector<std::size_t> messages;

  friend bool operator==(const DecodeCertificate&, const DecodeCertificate&) = default;
};

struct UserDecodeReport {
  int user = 0;
  bool decodable = false;
  std::vector<DecodeCertificate> certificates;
  std::vector<SubfileId> unresolved;  // desired subfiles outside the span
};

struct DecodeReport {
  std::vector<UserDecodeReport> users;

  [[nodiscard]] bool all_decodable() const {
    for (const auto& u : users)
      if (!u.decodable) return false;
    return true;
  }
  [[nodiscard]] const UserDecodeReport& for_user(int user) const {
    return users.at(static_cast<std::size_t>(user - 1));
  }
};

namespace detail {

// GF(2) row space with per-row provenance: which original messages were
// XORed into each stored pivot row. Deterministic: rows are inserted in
// message order and pivot on their lowest coordinate.
class Gf2Span {
public:
  explicit Gf2Span(std::size_t coords, std::size_t tracks)
      : coord_words_((coords + 63) / 64), track_words_((tracks + 63) / 64) {}

  void insert(std::vector<std::uint64_t> row, std::vector<std::uint64_t> track) {
    while (true) {
      const int lead = lowest_bit(row);
      if (lead < 0) return;  // linearly dependent, nothing new
      const auto it = pivot_by_coord_.find(lead);
      if (it == pivot_by_coord_.end()) {
        pivot_by_coord_.emplace(lead, rows_.size());
        rows_.push_back(std::move(row));
        tracks_.push_back(std::move(track));
        return;
      }
      xor_into(row, rows_[it->second]);
      xor_into(track, tracks_[it->second]);
    }
  }

  /// Expresses the unit vector of `coord` as a combination of inserted rows;
  /// returns the provenance bits, or nullopt when outside the span.
  [[nodiscard]] std::optional<std::vector<std::uint64_t>> solve_unit(int coord) const {
    std::vector<std::uint64_t> target(coord_words_, 0);
    target[static_cast<std::size_t>(coord) / 64] |= 1ull << (coord % 64);
    std::vector<std::uint64_t> track(track_words_, 0);
    while (true) {
      const int lead = lowest_bit(target);
      if (lead < 0) return track;
      const auto it = pivot_by_coord_.find(lead);
      if (it == pivot_by_coord_.end()) return std::nullopt;
      xor_into(target, rows_[it->second]);
      xor_into(track, tracks_[it->second]);
    }
  }

private:
  static int lowest_bit(const std::vector<std::uint64_t>& bits) {
    for (std::size_t w = 0; w < bits.size(); ++w)
      if (bits[w] != 0) return static_cast<int>(w * 64) + std::countr_zero(bits[w]);
    return -1;
  }
  static void xor_into(std::vector<std::uint64_t>& dst, const std::vector<std::uint64_t>& src) {
    for (std::size_t w = 0; w < src.size(); ++w) dst[w] ^= src[w];
  }

  std::size_t coord_words_;
  std::size_t track_words_;
  std::vector<std::vector<std::uint64_t>> rows_;
  std::vector<std::vector<std::uint64_t>> tracks_;
  std::map<int, std::size_t> pivot_by_coord_;
};

}  // namespace detail

/// Linear decodability check. For each user, every message is first reduced
/// by cancelling the parts that user holds in its cache; the user decodes
/// when each desired subfile's unit vector lies in the GF(2) span of the
/// reduced messages. Certificates come out of the elimination and always
/// re-verify by construction.
inline DecodeReport verify_decodability(const Placement& p, const Demand& dm,
                                        const DeliveryScheme& sc) {
  require_valid_demand(p.structure(), dm);
  for (const XorMessage& m : sc.messages)
    for (const SubfileId& part : m.parts) p.require_piece(part);

  DecodeReport report;
  for (int user = 1; user <= p.structure().users; ++user) {
    UserDecodeReport ur;
    ur.user = user;

    const std::vector<SubfileId> desired = p.desired_subfiles(dm, user);

    // coordinate space: everything this user cannot cancel out of the air
    std::vector<SubfileId> coords = desired;
    for (const XorMessage& m : sc.messages)
      for (const SubfileId& part : m.parts)
        if (!p.caches(user, part)) coords.push_back(part);
    std::sort(coords.begin(), coords.end());
    coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
    const auto coord_of = [&](const SubfileId& sub) {
      return static_cast<int>(std::lower_bound(coords.begin(), coords.end(), sub) - coords.begin());
    };

    detail::Gf2Span span(coords.size(), sc.messages.size());
    for (std::size_t mi = 0; mi < sc.messages.size(); ++mi) {
      std::vector<std::uint64_t> row((coords.size() + 63) / 64, 0);
      for (const SubfileId& part : sc.messages[mi].parts) {
        if (p.caches(user, part)) continue;
        const int c = coord_of(part);
        row[static_cast<std::size_t>(c) / 64] ^= 1ull << (c % 64);
      }
      std::vector<std::uint64_t> track((sc.messages.size() + 63) / 64, 0);
      track[mi / 64] |= 1ull << (mi % 64);
      span.insert(std::move(row), std::move(track));
    }

    ur.decodable = true;
    for (const SubfileId& want : desired) {
      const auto combo = span.solve_unit(coord_of(want));
      if (!combo) {
        ur.decodable = false;
        ur.unresolved.push_back(want);
        continue;
      }
      DecodeCertificate cert{want, {}};
      for (std::size_t w = 0; w < combo->size(); ++w)
        for (std::uint64_t bits = (*combo)[w]; bits != 0; bits &= bits - 1)
          cert.messages.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
      ur.certificates.push_back(std::move(cert));
    }
    report.users.push_back(std::move(ur));
  }
  return report;
}

/// Re-derives a certificate by hand: XOR the named messages, cancel cached
/// parts, and compare with the one desired subfile.
inline bool certificate_reverifies(const Placement& p, const DeliveryScheme& sc, int user,
                                   const DecodeCertificate& cert) {
  std::vector<SubfileId> acc;
  for (std::size_t mi : cert.messages)
    for (const SubfileId& part : sc.messages.at(mi).parts) {
      const auto it = std::find(acc.begin(), acc.end(), part);
      if (it == acc.end())
        acc.push_back(part);
      else
        acc.erase(it);  // GF(2): pairs cancel
    }
  std::vector<SubfileId> left;
  for (const SubfileId& part : acc)
    if (!p.caches(user, part)) left.push_back(part);
  return left.size() == 1 && left[0] == cert.subfile;
}

/// Delivery for a demand in which some group of alpha users requests
/// pairwise-distinct files of their shared class: one classical XOR round
/// inside the group, then plain uncoded delivery to everyone outside.
inline DeliveryScheme alpha_demand_scheme(const Placement& p, const Demand& dm) {
  if (p.kind() != PlacementKind::SelfishMan)
    throw std::invalid_argument("scheme is defined over the selfish placement");
  const auto group = alpha_demand_witness(p.structure(), dm);
  if (!group) throw std::invalid_argument("demand has no distinct-file group");
  const int t = p.redundancy();

  DeliveryScheme sc;
  sc.subpacketization = p.subpacketization();
  for_each_subset_of_size(*group, t + 1, [&](UserSet round) {
    std::vector<SubfileId> parts;
    for (int k : round.members()) parts.push_back({dm.request_of(k), round.without(k)});
    sc.messages.emplace_back(std::move(parts));
  });
  for (int k = 1; k <= p.structure().users; ++k) {
    if (group->contains(k)) continue;
    for (const SubfileId& sub : p.desired_subfiles(dm, k))
      sc.messages.emplace_back(std::vector<SubfileId>{sub});
  }
  return sc;
}

namespace detail {

// XOR templates for the tight circular-demand schemes, written relative to
// the witness ordering: entry {i, {a,b,...}} is the subfile of the file
// demanded by the user at slot i, tagged by the users at slots {a,b,...}.
struct TemplateTerm {
  int owner_slot;
  std::vector<int> tag_slots;
};
using SchemeTemplate = std::vector<std::vector<TemplateTerm>>;

inline const SchemeTemplate& template_5_4_t2() {
  static const SchemeTemplate tpl{
      {{1, {2, 3}}, {2, {3, 5}}, {3, {1, 4}}}, {{3, {1, 4}}, {1, {2, 4}}, {4, {1, 2}}},
      {{2, {3, 5}}, {5, {1, 3}}, {3, {1, 5}}}, {{1, {3, 4}}, {4, {1, 5}}},
      {{2, {3, 4}}, {4, {2, 5}}},              {{2, {4, 5}}, {5, {1, 2}}},
      {{3, {4, 5}}, {5, {2, 3}}}};
  return tpl;
}

inline const SchemeTemplate& template_5_4_t3() {
  static const SchemeTemplate tpl{{{1, {2, 3, 4}}, {2, {3, 4, 5}}, {4, {1, 2, 5}}},
                                  {{1, {2, 3, 4}}, {3, {1, 4, 5}}, {5, {1, 2, 3}}}};
  return tpl;
}

inline const SchemeTemplate& template_6_5_t3() {
  static const SchemeTemplate tpl{
      {{1, {2, 3, 4}}, {2, {4, 5, 6}}, {4, {2, 5, 6}}},
      {{4, {1, 5, 6}}, {1, {2, 3, 5}}, {5, {1, 2, 3}}},
      {{1, {2, 3, 4}}, {4, {1, 5, 6}}, {6, {1, 3, 4}}, {3, {1, 4, 6}}},
      {{2, {3, 4, 5}}, {3, {1, 5, 6}}, {5, {1, 3, 6}}},
      {{5, {1, 2, 6}}, {2, {3, 4, 6}}, {6, {2, 3, 4}}},
      {{2, {3, 4, 5}}, {5, {1, 2, 6}}, {1, {2, 4, 5}}, {4, {1, 2, 5}}},
      {{3, {4, 5, 6}}, {4, {1, 2, 6}}, {6, {1, 2, 4}}},
      {{6, {1, 2, 3}}, {3, {1, 4, 5}}, {1, {3, 4, 5}}},
      {{3, {4, 5, 6}}, {6, {1, 2, 3}}, {2, {3, 5, 6}}, {5, {2, 3, 6}}}};
  return tpl;
}

inline DeliveryScheme instantiate_template(const SchemeTemplate& tpl, const Placement& p,
                                           const Demand& dm, const UserPermutation& witness) {
  DeliveryScheme sc;
  sc.subpacketization = p.subpacketization();
  for (const auto& message : tpl) {
    std::vector<SubfileId> parts;
    for (const auto& term : message) {
      const int owner = witness.user_at(term.owner_slot);
      UserSet tag;
      for (int slot : term.tag_slots) tag = tag.with(witness.user_at(slot));
      parts.push_back({dm.request_of(owner), tag});
    }
    sc.messages.emplace_back(std::move(parts));
  }
  return sc;
}

inline void require_circular_inputs(const Placement& p, const Demand& dm,
                                    const UserPermutation& witness, int users, int audience,
                                    int redundancy) {
  const FdsStructure& s = p.structure();
  if (s.users != users || s.audience_size != audience)
    throw std::invalid_argument("scheme is specific to the (" + std::to_string(users) + "," +
                                std::to_string(audience) + ",f) structure");
  if (p.kind() != PlacementKind::SelfishMan || p.redundancy() != redundancy)
    throw std::invalid_argument("scheme needs the selfish placement with t = " +
                                std::to_string(redundancy));
  require_valid_demand(s, dm);
  if (!satisfies_circular_pattern(s, dm, witness))
    throw std::invalid_argument("ordering does not witness a circular demand");
}

}  // namespace detail

/// Tight scheme for circular demands on the (5,4,f) structure, t in {2,3}.
/// Loads 7/6 and 1/2 respectively, any f.
inline DeliveryScheme circular_scheme_5_4(const Placement& p, const Demand& dm,
                                          const UserPermutation& witness) {
  const int t = p.redundancy();
  if (t != 2 && t != 3) throw std::invalid_argument("(5,4,f) scheme exists for t in {2,3}");
  detail::require_circular_inputs(p, dm, witness, 5, 4, t);
  return detail::instantiate_template(t == 2 ? detail::template_5_4_t2() : detail::template_5_4_t3(),
                                      p, dm, witness);
}

/// Tight scheme for circular demands on the (6,5,f) structure at t = 3;
/// nine messages over subpacketization 10, load 9/10, any f.
inline DeliveryScheme circular_scheme_6_5_t3(const Placement& p, const Demand& dm,
                                             const UserPermutation& witness) {
  detail::require_circular_inputs(p, dm, witness, 6, 5, 3);
  return detail::instantiate_template(detail::template_6_5_t3(), p, dm, witness);
}

/// Every desired subfile of every user, sent uncoded.
inline DeliveryScheme uncoded_scheme(const Placement& p, const Demand& dm) {
  require_valid_demand(p.structure(), dm);
  DeliveryScheme sc;
  sc.subpacketization = p.subpacketization();
  for (int k = 1; k <= p.structure().users; ++k)
    for (const SubfileId& sub : p.desired_subfiles(dm, k))
      sc.messages.emplace_back(std::vector<SubfileId>{sub});
  return sc;
}

/// The classical unselfish scheme: one XOR per (t+1)-group of users.
inline DeliveryScheme man_scheme(const Placement& p, const Demand& dm) {
  if (p.kind() != PlacementKind::UnselfishMan)
    throw std::invalid_argument("scheme is defined over the unselfish placement");
  require_valid_demand(p.structure(), dm);
  DeliveryScheme sc;
  sc.subpacketization = p.subpacketization();
  for_each_subset_of_size(UserSet::all(p.structure().users), p.redundancy() + 1,
                          [&](UserSet round) {
                            std::vector<SubfileId> parts;
                            for (int k : round.members())
                              parts.push_back({dm.request_of(k), round.without(k)});
                            sc.messages.emplace_back(std::move(parts));
                          });
  return sc;
}

/// Line-oriented scheme text: one message per line, parts joined by '+',
/// each part as W[i,S,T] with S and T sorted digit strings. Round-trips
/// byte-exactly; only defined while user labels fit one digit.
inline std::string serialize_scheme(const DeliveryScheme& sc) {
  std::string out;
  for (const XorMessage& m : sc.messages) {
    for (std::size_t i = 0; i < m.parts.size(); ++i) {
      if (i) out += '+';
      const SubfileId& sub = m.parts[i];
      out += "W[" + std::to_string(sub.file.index) + "," + sub.file.file_class.digits() + "," +
             sub.tag.digits() + "]";
    }
    out += '\n';
  }
  return out;
}

inline DeliveryScheme parse_scheme(const Placement& p, std::string_view text) {
  DeliveryScheme sc;
  sc.subpacketization = p.subpacketization();
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.empty()) continue;

    std::vector<SubfileId> parts;
    std::size_t at = 0;
    while (at < line.size()) {
      if (line.compare(at, 2, "W[") != 0) throw std::invalid_argument("malformed scheme line");
      const auto close = line.find(']', at);
      if (close == std::string_view::npos) throw std::invalid_argument("malformed scheme line");
      const std::string body(line.substr(at + 2, close - at - 2));
      const auto c1 = body.find(',');
      const auto c2 = body.find(',', c1 + 1);
      if (c1 == std::string::npos || c2 == std::string::npos)
        throw std::invalid_argument("malformed subfile id");
      SubfileId sub{{UserSet::from_digits(body.substr(c1 + 1, c2 - c1 - 1)),
                     std::stoi(body.substr(0, c1))},
                    UserSet::from_digits(body.substr(c2 + 1))};
      p.require_piece(sub);
      parts.push_back(sub);
      at = close + 1;
      if (at < line.size()) {
        if (line[at] != '+' || at + 1 >= line.size())
          throw std::invalid_argument("malformed scheme line");
        ++at;
      }
    }
    sc.messages.emplace_back(std::move(parts));
  }
  return sc;
}

}  // namespace selfishcc
