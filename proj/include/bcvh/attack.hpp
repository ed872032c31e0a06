#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "bcvh/sim.hpp"

namespace bcvh {

// One exercised threat category and whether the honest-side invariant held.
struct AttackVerdict {
    std::string category;   // STRIDE bucket
    std::string behavior;   // adversary behavior that exercised it
    bool held = false;
    std::string detail;
};

struct AttackReport {
    std::vector<AttackVerdict> verdicts;

    bool all_held() const {
        for (const auto& v : verdicts)
            if (!v.held) return false;
        return !verdicts.empty();
    }
};

namespace detail {

inline bool chain_has_digest(const LedgerState& ledger, const std::string& hex) {
    for (const auto& b : ledger.blocks)
        for (const auto& tx : b.txs)
            if (to_hex(tx_digest(tx)) == hex) return true;
    return false;
}

inline size_t digest_occurrences(const LedgerState& ledger, const std::string& hex) {
    size_t n = 0;
    for (const auto& b : ledger.blocks)
        for (const auto& tx : b.txs)
            if (to_hex(tx_digest(tx)) == hex) ++n;
    return n;
}

}  // namespace detail

// Executes the configured adversary behaviors and reports, per STRIDE
// category, whether the honest invariants held.
inline std::pair<SimResult, AttackReport> run_attack(const ScenarioConfig& cfg) {
    SimResult result = run_scenario(cfg);
    AttackReport report;
    const Acl acl = scenario_acl(cfg);

    auto honest_ledger = [&](const std::string& id) -> const LedgerState& {
        return result.final_ledgers.at(id);
    };

    // Chains held by honest nodes must stay valid under every behavior.
    bool all_valid = true;
    std::string invalid_at;
    for (const auto& id : result.honest_nodes) {
        if (!verify_chain(honest_ledger(id).blocks, acl).ok) {
            all_valid = false;
            invalid_at = id;
        }
    }

    std::set<AdversaryKind> kinds;
    for (const auto& a : cfg.adversaries) kinds.insert(a.kind);

    for (const auto& spec : cfg.adversaries) {
        switch (spec.kind) {
            case AdversaryKind::Tamper: {
                bool clean = all_valid;
                for (const auto& id : result.honest_nodes) {
                    for (const auto& b : honest_ledger(id).blocks)
                        for (const auto& tx : b.txs)
                            for (const auto& sector : tx.view.sectors)
                                for (const auto& lm : sector)
                                    if (lm.rfind("TAMPERED_", 0) == 0) clean = false;
                }
                report.verdicts.push_back(
                    {"tampering", "tamper", clean,
                     clean ? "tampered gossip rejected by every honest node"
                           : "tampered payload reached an honest chain"});
                break;
            }
            case AdversaryKind::Spoof: {
                bool clean = all_valid;
                for (const auto& id : result.honest_nodes)
                    for (const auto& hex : result.spoofed_tx_digests)
                        if (detail::chain_has_digest(honest_ledger(id), hex))
                            clean = false;
                std::string category =
                    spec.mode == "observer-role" ? "elevation-of-privilege" : "spoofing";
                report.verdicts.push_back(
                    {category, "spoof(" + (spec.mode.empty() ? "fabricated-id" : spec.mode) + ")",
                     clean,
                     clean ? "no spoofed submission was ever committed"
                           : "a spoofed submission reached a committed block"});
                break;
            }
            case AdversaryKind::Replay: {
                bool clean = all_valid;
                for (const auto& id : result.honest_nodes)
                    for (const auto& hex : result.replayed_tx_digests)
                        if (detail::digest_occurrences(honest_ledger(id), hex) > 1)
                            clean = false;
                report.verdicts.push_back(
                    {"repudiation", "replay", clean,
                     clean ? "replayed submissions never re-committed"
                           : "a replayed submission was committed twice"});
                break;
            }
            case AdversaryKind::Flood: {
                // rate limiting must bound the flooder's per-block share and
                // honest traffic must still commit
                bool bounded = true;
                bool honest_committed = false;
                for (const auto& id : result.honest_nodes) {
                    for (const auto& b : honest_ledger(id).blocks) {
                        size_t from_flooder = 0;
                        for (const auto& tx : b.txs) {
                            if (tx.robot_id == spec.node_id)
                                ++from_flooder;
                            else if (acl.is_member(tx.robot_id))
                                honest_committed = true;
                        }
                        if (from_flooder > cfg.consensus.max_txs_per_robot_per_block)
                            bounded = false;
                    }
                }
                bool clean = all_valid && bounded && honest_committed;
                report.verdicts.push_back(
                    {"denial-of-service", "flood", clean,
                     clean ? "flooder capped per block, honest traffic committed"
                           : bounded ? "honest traffic starved under flood"
                                     : "flooder exceeded its per-block cap"});
                break;
            }
            case AdversaryKind::WithholdVotes: {
                // counted once for the whole withholding coalition
                if (!report.verdicts.empty() &&
                    report.verdicts.back().behavior == "withhold_votes")
                    break;
                size_t withholding = 0;
                for (const auto& a : cfg.adversaries)
                    if (a.kind == AdversaryKind::WithholdVotes) ++withholding;
                bool majority_silent =
                    withholding >= (acl.member_count() + 2 - 1) / 2;  // ceil(n/2)
                bool stalled = true;
                for (const auto& id : result.honest_nodes)
                    if (honest_ledger(id).height() > 0) stalled = false;
                bool clean = majority_silent ? (stalled && all_valid)
                                             : (!stalled && all_valid);
                report.verdicts.push_back(
                    {"denial-of-service", "withhold_votes", clean,
                     majority_silent
                         ? (clean ? "majority withholding stalls commits, safety holds"
                                  : "stall or safety expectation violated")
                         : (clean ? "minority withholding tolerated, commits proceed"
                                  : "commits stopped despite honest majority")});
                break;
            }
            case AdversaryKind::ForkMiner: {
                bool agree = all_valid;
                std::string tip_hex;
                for (const auto& id : result.honest_nodes) {
                    auto hex = to_hex(block_hash(honest_ledger(id).tip()));
                    if (tip_hex.empty())
                        tip_hex = hex;
                    else if (tip_hex != hex)
                        agree = false;
                }
                report.verdicts.push_back(
                    {"tampering", "fork_miner", agree,
                     agree ? "honest nodes converged on one longest valid chain"
                           : "honest nodes disagree after fork publication"});
                break;
            }
        }
    }

    // Repudiation evidence: every committed tx is covered by receipts in
    // honest audit logs (quorum - 1 receivers beside the sender).
    {
        size_t required = cfg.consensus.required_votes(acl.member_count());
        bool covered = true;
        size_t committed = 0;
        const auto& any_honest = *result.honest_nodes.begin();
        for (const auto& b : honest_ledger(any_honest).blocks) {
            for (const auto& tx : b.txs) {
                ++committed;
                Digest d = tx_digest(tx);
                size_t receipts = 0;
                for (const auto& id : result.honest_nodes) {
                    for (const auto& rc : result.audit_logs.at(id))
                        if (rc.message_digest == d && verify_receipt(rc, acl))
                            ++receipts;
                }
                if (receipts + 1 < required) covered = false;
            }
        }
        report.verdicts.push_back(
            {"information-disclosure", "audit-trail", covered,
             "signed delivery receipts cover " + std::to_string(committed) +
                 " committed txs (read access is in-team by design)"});
    }

    return {std::move(result), std::move(report)};
}

}  // namespace bcvh
