#ifndef TFM_CAPTURE_HPP
#define TFM_CAPTURE_HPP

// Finite probability spaces with exact rational masses, explicit periodic
// capturing sequences, verification of the capture equation through block
// division, and seeded Monte-Carlo frequency trials.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tfm/laws.hpp"
#include "tfm/mean.hpp"
#include "tfm/seq.hpp"

namespace tfm {

using EventSet = std::set<Label>;

struct ProbSpace {
  std::vector<Label> outcomes;  // declared order drives the pattern layout
  std::map<Label, Rat> mass;
  std::vector<std::pair<std::string, EventSet>> events;

  Rat measure(const EventSet& a) const {
    Rat m(0);
    for (const auto& label : a) {
      auto it = mass.find(label);
      if (it == mass.end()) throw Error(ErrorKind::UnknownLabel, "unknown outcome " + label);
      m += it->second;
    }
    return m;
  }
};

// Line-oriented space file:
//   outcome <label> <p/q>
//   event <name> <label> [<label> ...]
// '#' starts a comment. Masses must sum to exactly 1.
inline ProbSpace parse_space(std::istream& in) {
  ProbSpace space;
  std::set<std::string> event_names;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "outcome") {
      std::string label, frac;
      if (!(ls >> label >> frac))
        throw Error(ErrorKind::ValidationError,
                    "line " + std::to_string(line_no) + ": expected `outcome <label> <p/q>`");
      if (space.mass.count(label))
        throw Error(ErrorKind::ValidationError, "duplicate outcome " + label);
      Rat m = parse_rat(frac);
      if (m < 0 || m > 1)
        throw Error(ErrorKind::ValidationError, "mass of " + label + " outside [0,1]");
      space.outcomes.push_back(label);
      space.mass[label] = m;
    } else if (head == "event") {
      std::string name;
      if (!(ls >> name))
        throw Error(ErrorKind::ValidationError,
                    "line " + std::to_string(line_no) + ": expected `event <name> ...`");
      if (!event_names.insert(name).second)
        throw Error(ErrorKind::ValidationError, "duplicate event " + name);
      EventSet members;
      std::string label;
      while (ls >> label) members.insert(label);
      space.events.emplace_back(name, std::move(members));
    } else {
      throw Error(ErrorKind::ValidationError,
                  "line " + std::to_string(line_no) + ": unknown directive " + head);
    }
  }
  if (space.outcomes.empty())
    throw Error(ErrorKind::ValidationError, "space declares no outcomes");
  for (const auto& [name, members] : space.events)
    for (const auto& label : members)
      if (!space.mass.count(label))
        throw Error(ErrorKind::ValidationError,
                    "event " + name + " references unknown outcome " + label);
  Rat total(0);
  for (const auto& [label, m] : space.mass) total += m;
  if (total != 1)
    throw Error(ErrorKind::ValidationError, "masses sum to " + to_string(total) + ", expected 1");
  return space;
}

inline ProbSpace parse_space_text(const std::string& text) {
  std::istringstream in(text);
  return parse_space(in);
}

// The base pattern lists N*mass(o) copies of each outcome in declared order,
// N the least common denominator; depth k wraps the pattern in k omega
// repetitions, giving length w^k. Zero-mass outcomes never appear.
inline SeqExpr build_capture(const ProbSpace& space, int depth) {
  if (depth < 1) throw Error(ErrorKind::ValidationError, "capture depth must be >= 1");
  Int lcd = 1;
  for (const auto& [label, m] : space.mass)
    lcd = boost::multiprecision::lcm(lcd, denominator(m));
  std::vector<SeqExpr> pattern;
  for (const auto& label : space.outcomes) {
    Int copies = numerator(space.mass.at(label)) * (lcd / denominator(space.mass.at(label)));
    if (copies > 0) pattern.push_back(seq_const(Scalar(label), Ordinal::natural(copies)));
  }
  SeqExpr x = seq_cat(pattern);
  for (int i = 0; i < depth; ++i) x = seq_repw(x);
  return x;
}

// (Ax): 1 where the value lies in A, 0 otherwise.
inline SeqExpr indicator_sequence(const ProbSpace& space, const SeqExpr& x, const EventSet& a) {
  ValueTable table;
  for (const auto& v : value_set(x)) {
    if (!is_rat(v)) {
      const Label& label = std::get<Label>(v);
      if (!space.mass.count(label))
        throw Error(ErrorKind::UnknownLabel, "sequence mentions unknown outcome " + label);
      table[v] = a.count(label) ? Rat(1) : Rat(0);
    } else {
      throw Error(ErrorKind::ValidationError, "capture sequence holds a non-label value");
    }
  }
  return map_values(x, table);
}

struct EventResult {
  std::string name;
  EventSet members;
  Rat measure;
  std::optional<Rat> mean_value;
  SeqExpr divided;
  bool pass;
};

struct CaptureReport {
  Ordinal resolution;
  std::vector<EventResult> results;
  bool all_pass = true;
};

namespace detail {

inline std::string event_list_name(const ProbSpace& space, const EventSet& a) {
  if (a.empty()) return "{}";
  if (a.size() == space.outcomes.size()) return "X";
  std::string out = "{";
  bool first = true;
  for (const auto& label : a) {
    if (!first) out += ",";
    first = false;
    out += label;
  }
  return out + "}";
}

}  // namespace detail

// Checks the capture equation for every declared event plus, always, every
// complement of a declared event, every singleton, the empty event, and the
// whole space. An event passes when its indicator sequence has an exact mean
// equal to its measure and the divided form collapses to that constant.
// The paper-side equation fixes no length for the divided constant; the
// report records whatever quotient length division produces.
inline CaptureReport verify_capture(const ProbSpace& space, const SeqExpr& x,
                                    const Ordinal& resolution) {
  if (left_divide(resolution, x.length()).remainder != Ordinal())
    throw Error(ErrorKind::NotDivisible, "resolution does not divide the sequence length");

  std::vector<std::pair<std::string, EventSet>> to_check;
  for (const auto& [name, members] : space.events) to_check.emplace_back(name, members);
  for (const auto& [name, members] : space.events) {
    EventSet complement;
    for (const auto& o : space.outcomes)
      if (!members.count(o)) complement.insert(o);
    to_check.emplace_back("~" + name, std::move(complement));
  }
  for (const auto& o : space.outcomes) to_check.emplace_back("{" + o + "}", EventSet{o});
  to_check.emplace_back("{}", EventSet{});
  to_check.emplace_back("X", EventSet(space.outcomes.begin(), space.outcomes.end()));

  CaptureReport report;
  report.resolution = resolution;
  for (auto& [name, members] : to_check) {
    SeqExpr ax = indicator_sequence(space, x, members);
    Rat m = space.measure(members);
    std::optional<Rat> mv = mean(ax);
    SeqExpr divided = divide(ax, resolution);
    bool constant = divided.kind() == SeqExpr::Kind::Const &&
                    std::get<Rat>(divided.const_value()) == m;
    bool pass = mv.has_value() && *mv == m && constant;
    report.all_pass = report.all_pass && pass;
    report.results.push_back(EventResult{name, members, m, mv, divided, pass});
  }
  return report;
}

// Perturbing an event by outcomes of mass zero never moves the mean.
inline bool null_robustness_check(const ProbSpace& space, const SeqExpr& x, const EventSet& a,
                                  const EventSet& nullset) {
  for (const auto& label : nullset) {
    auto it = space.mass.find(label);
    if (it == space.mass.end())
      throw Error(ErrorKind::UnknownLabel, "unknown outcome " + label);
    if (it->second != 0)
      throw Error(ErrorKind::NotNull, "outcome " + label + " has positive mass");
  }
  EventSet perturbed;
  std::set_symmetric_difference(a.begin(), a.end(), nullset.begin(), nullset.end(),
                                std::inserter(perturbed, perturbed.begin()));
  auto m1 = mean(indicator_sequence(space, x, a));
  auto m2 = mean(indicator_sequence(space, x, perturbed));
  return m1.has_value() && m2.has_value() && *m1 == *m2 && *m1 == space.measure(a);
}

// --- strong-law sampling -----------------------------------------------------

struct SllnTrial {
  double max_deviation = 0.0;
  std::string worst_event;
  double worst_bound = 0.0;
  bool exceeded = false;
};

struct SllnReport {
  long samples = 0;
  int trials = 0;
  std::vector<SllnTrial> per_trial;
  int exceedances = 0;
};

// Draws i.i.d. outcomes by mass (deterministic for a given seed) and compares
// every event's empirical frequency against its measure. The comparison
// bound is the binomial 3-sigma radius; zero-variance events cannot deviate
// and never flag.
inline SllnReport slln_trial(const ProbSpace& space, long samples, int trials,
                             std::uint64_t seed) {
  if (samples < 1) throw Error(ErrorKind::ValidationError, "samples must be >= 1");
  if (trials < 1) throw Error(ErrorKind::ValidationError, "trials must be >= 1");

  // Cumulative 64-bit thresholds for exact-by-construction sampling.
  std::vector<std::pair<Label, Int>> thresholds;
  Rat cum(0);
  const Int two64 = Int(1) << 64;
  for (const auto& o : space.outcomes) {
    cum += space.mass.at(o);
    thresholds.emplace_back(o, (numerator(cum) * two64) / denominator(cum));
  }

  std::vector<EventSet> events;
  std::vector<std::string> names;
  if (space.outcomes.size() <= 12) {
    std::size_t n = space.outcomes.size();
    for (std::size_t bits = 0; bits < (std::size_t{1} << n); ++bits) {
      EventSet ev;
      for (std::size_t j = 0; j < n; ++j)
        if (bits & (std::size_t{1} << j)) ev.insert(space.outcomes[j]);
      names.push_back(detail::event_list_name(space, ev));
      events.push_back(std::move(ev));
    }
  } else {
    for (const auto& [name, members] : space.events) {
      names.push_back(name);
      events.push_back(members);
    }
  }

  SllnReport report;
  report.samples = samples;
  report.trials = trials;
  for (int t = 0; t < trials; ++t) {
    Rng rng(mix_seed(seed, 0x5111, static_cast<std::uint64_t>(t)));
    std::map<Label, long> counts;
    for (long i = 0; i < samples; ++i) {
      Int draw = rng.u64();
      for (const auto& [label, bound] : thresholds) {
        if (draw < bound) {
          counts[label] += 1;
          break;
        }
      }
    }
    SllnTrial trial;
    for (std::size_t e = 0; e < events.size(); ++e) {
      long hit = 0;
      for (const auto& label : events[e]) hit += counts[label];
      Rat freq(hit, samples);
      Rat m = space.measure(events[e]);
      double dev = std::abs(static_cast<double>(freq - m));
      double mm = static_cast<double>(m);
      double bound = 3.0 * std::sqrt(mm * (1.0 - mm) / static_cast<double>(samples));
      bool exceeded = dev > 0.0 && dev >= bound;
      if (dev > trial.max_deviation) {
        trial.max_deviation = dev;
        trial.worst_event = names[e];
        trial.worst_bound = bound;
      }
      if (exceeded) trial.exceeded = true;
    }
    if (trial.exceeded) report.exceedances += 1;
    report.per_trial.push_back(std::move(trial));
  }
  return report;
}

}  // namespace tfm

#endif  // TFM_CAPTURE_HPP
