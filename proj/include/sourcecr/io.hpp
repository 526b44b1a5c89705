#ifndef SOURCECR_IO_HPP
#define SOURCECR_IO_HPP

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "sourcecr/framework.hpp"
#include "sourcecr/metrics.hpp"
#include "sourcecr/opinions.hpp"
#include "sourcecr/spread.hpp"

namespace sourcecr {

// CSV in the RFC 4180 style: comma separated, fields containing a comma,
// quote, CR or LF are quoted and inner quotes doubled. Readers accept LF or
// CRLF line endings.

std::string csv_escape(std::string_view field);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    /// Physical line on which each row starts (1-based), for error messages.
    std::vector<std::size_t> lines;
};

/// Parses a whole stream. Blank lines are skipped. Rows whose width differs
/// from the header raise ParseError.
CsvTable read_csv(std::istream& in);

/// Shortest round-trip representation ("{:.17g}"); "nan", "inf", "-inf" for
/// non-finite values.
std::string format_number(double x);

/// Header claim_id,user_id,opinion. Opinion is 1/-1 (also +1, "for",
/// "against"). Duplicate (user, claim) pairs are an error.
std::vector<OpinionRecord> read_opinion_records(std::istream& in);
/// `users` adds silent users (e.g. every graph node) to the universe.
OpinionMatrix load_opinions_csv(const std::string& path, std::span<const NodeId> users = {});
void write_opinions_csv(const OpinionMatrix& opinions, std::ostream& out);

/// Header claim_id,label with label true/false, case-insensitive.
LabelMap read_claim_labels(std::istream& in);
LabelMap load_claim_labels_csv(const std::string& path);
void write_claim_labels_csv(const LabelMap& labels, std::ostream& out);

/// Per-node spread records: claim_id,node_id,state,infect_time,parent_id
/// with state in {pros, cons} and an empty parent for sources. Susceptible
/// nodes are omitted.
void write_spread_csv(const SocialGraph& g, std::span<const SpreadOutcome> outcomes, std::ostream& out);
std::vector<SpreadOutcome> read_spread_csv(const SocialGraph& g, std::istream& in);

/// Sources per claim recovered from spread records.
std::vector<ClaimGroundTruth> truths_from_spread(std::span<const SpreadOutcome> outcomes, const LabelMap& z);

/// claim_id,credibility,prior,verdict
void write_credibility_csv(const OpinionMatrix& opinions, std::span<const double> credibility,
                           std::span<const double> prior, std::ostream& out);
/// Reads claim_id,credibility (other columns ignored).
std::map<ClaimId, double> read_credibility_csv(std::istream& in);

/// user_id,eta_pos,eta_neg,reliability
void write_reliability_csv(const OpinionMatrix& opinions, std::span<const double> eta_pos,
                           std::span<const double> eta_neg, std::span<const double> reliability,
                           std::ostream& out);
/// Reads user_id,reliability (other columns ignored).
ReliabilityMap read_reliability_csv(std::istream& in);

/// claim_id,side,attempted,label,center,source,t_id,t_dir with node sets as
/// space separated ids.
void write_detections_csv(const SocialGraph& g, std::span<const DetectionResult> detections, std::ostream& out);

std::ifstream open_input(const std::string& path);
std::ofstream open_output(const std::string& path);

} // namespace sourcecr

#endif // SOURCECR_IO_HPP
