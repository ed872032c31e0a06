#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "bcvh/acl.hpp"
#include "bcvh/ledger.hpp"

namespace bcvh {

struct ConsensusParams {
    uint32_t difficulty = 8;
    uint64_t block_interval_us = 200'000;   // proposal cadence
    double quorum = 0.5;                    // commit needs votes > quorum * members
    uint32_t max_txs_per_robot_per_block = 4;
    uint64_t round_timeout_us = 400'000;
    uint32_t heartbeat_every = 8;           // empty block only every k-th round

    // Smallest vote count strictly above quorum * members; the default 0.5
    // yields a strict majority (2-of-3, 4-of-7). quorum = 1 means all members.
    size_t required_votes(size_t members) const {
        if (quorum >= 1.0) return members;
        return static_cast<size_t>(quorum * static_cast<double>(members)) + 1;
    }
};

enum class MsgKind { SubmitTx, Propose, Vote, Commit, ChainRequest, ChainResponse };

inline const char* msg_kind_name(MsgKind k) {
    switch (k) {
        case MsgKind::SubmitTx: return "submit_tx";
        case MsgKind::Propose: return "propose";
        case MsgKind::Vote: return "vote";
        case MsgKind::Commit: return "commit";
        case MsgKind::ChainRequest: return "chain_request";
        case MsgKind::ChainResponse: return "chain_response";
    }
    return "?";
}

// Votes and commit announcements are signed with the same identity keys as
// transactions.
struct VotePayload {
    Digest block_hash{};
    std::string voter_id;
    Signature signature{};
};

struct ChainRequestPayload {};

using MsgPayload = std::variant<FovTransaction, Block, VotePayload,
                                ChainRequestPayload, std::vector<Block>>;

struct ConsensusMessage {
    MsgKind kind = MsgKind::ChainRequest;
    std::string sender_id;
    MsgPayload payload;
};

inline Bytes vote_signing_bytes(MsgKind kind, const Digest& hash,
                                const std::string& voter_id) {
    Bytes out;
    append_tag(out, "VHVT1");
    out.push_back(kind == MsgKind::Commit ? 1 : 0);
    append_raw(out, hash);
    append_lp_string(out, voter_id);
    return out;
}

inline VotePayload make_vote(const RobotIdentity& identity, MsgKind kind,
                             const Digest& hash) {
    VotePayload v;
    v.block_hash = hash;
    v.voter_id = identity.robot_id;
    v.signature = ed25519_sign(identity.private_key,
                               sha512(vote_signing_bytes(kind, hash, identity.robot_id)));
    return v;
}

inline bool verify_vote(const VotePayload& v, MsgKind kind, const Acl& acl) {
    const AclEntry* entry = acl.find(v.voter_id);
    if (entry == nullptr || entry->role != Role::Member) return false;
    return ed25519_verify(entry->public_key,
                          sha512(vote_signing_bytes(kind, v.block_hash, v.voter_id)),
                          v.signature);
}

// An outbound message; no recipient means broadcast to every other node.
struct Outbound {
    std::optional<std::string> to;
    ConsensusMessage msg;
};

// One auditable decision, stamped with time and node id by the harness.
struct Note {
    std::string event;
    std::string detail;
};

struct StepResult {
    std::vector<Outbound> out;
    std::vector<Note> notes;

    void note(std::string event, std::string detail) {
        notes.push_back({std::move(event), std::move(detail)});
    }
};

enum class Phase { Idle, Proposed, Committing };

inline const char* phase_name(Phase p) {
    switch (p) {
        case Phase::Idle: return "idle";
        case Phase::Proposed: return "proposed";
        case Phase::Committing: return "committing";
    }
    return "?";
}

// Per-node consensus state machine. Deterministic: (state, event, time) ->
// (state, outputs); the harness owns delivery order and all clocks.
class Node {
  public:
    Node(RobotIdentity identity, const Acl& acl, ConsensusParams params)
        : identity_(std::move(identity)),
          acl_(acl),
          params_(params),
          ledger_(make_ledger(acl)),
          members_(acl.sorted_members()) {
        if (members_.empty())
            throw std::invalid_argument("acl has no member entries");
    }

    const std::string& id() const { return identity_.robot_id; }
    const LedgerState& ledger() const { return ledger_; }
    const std::vector<FovTransaction>& mempool() const { return mempool_; }
    uint64_t round() const { return round_; }
    Phase phase() const { return phase_; }
    const std::vector<DeliveryReceipt>& audit_log() const { return audit_log_; }
    uint64_t validations_performed() const { return validations_; }
    const std::map<Digest, std::set<std::string>>& pending_votes() const {
        return pending_votes_;
    }

    const std::string& designated_proposer() const {
        return members_[round_ % members_.size()];
    }

    // A robot hands its freshly signed FOV update to its own node. On
    // success the tx enters the mempool and is broadcast to the network.
    StepResult submit_tx(const FovTransaction& tx, uint64_t now_us) {
        StepResult r;
        if (accept_tx(tx, r)) {
            r.out.push_back({std::nullopt, {MsgKind::SubmitTx, id(), tx}});
        }
        return r;
    }

    // Proposal cadence tick. Only the round's designated proposer acts, at
    // most once per round; an empty mempool yields a heartbeat block only
    // every params.heartbeat_every rounds.
    StepResult on_propose_timer(uint64_t now_us) {
        StepResult r;
        if (designated_proposer() != id()) return r;
        if (proposed_round_ == round_) return r;

        auto txs = drain_mempool();
        if (txs.empty() && round_ % params_.heartbeat_every != 0) return r;

        proposed_round_ = round_;
        Block block = mine_block(ledger_.tip(), std::move(txs), id(), now_us,
                                 params_.difficulty);
        Digest h = block_hash(block.header);
        r.note("propose", "height=" + std::to_string(block.header.index) +
                              " txs=" + std::to_string(block.txs.size()) +
                              " nonce=" + std::to_string(block.header.nonce));
        phase_ = Phase::Proposed;
        pending_blocks_[h] = block;
        validated_.insert(h);
        r.out.push_back({std::nullopt, {MsgKind::Propose, id(), block}});
        cast_vote(h, block.header.prev_hash, r);
        try_commit(h, r);
        return r;
    }

    // Stuck-round escape hatch: rotates the designated proposer. The harness
    // calls this when `round` has not advanced for round_timeout_us.
    StepResult on_round_timeout(uint64_t round, uint64_t now_us) {
        StepResult r;
        if (round != round_) return r;  // stale timer
        round_ += 1;
        phase_ = Phase::Idle;
        r.note("round_timeout", "advanced to round " + std::to_string(round_));
        return r;
    }

    StepResult on_message(const ConsensusMessage& msg, uint64_t now_us) {
        StepResult r;
        switch (msg.kind) {
            case MsgKind::SubmitTx:
                handle_submit(std::get<FovTransaction>(msg.payload), now_us, r);
                break;
            case MsgKind::Propose:
                handle_proposal(std::get<Block>(msg.payload), msg.sender_id, now_us, r);
                break;
            case MsgKind::Vote:
            case MsgKind::Commit:
                handle_vote(std::get<VotePayload>(msg.payload), msg.kind,
                            msg.sender_id, r);
                break;
            case MsgKind::ChainRequest:
                r.out.push_back(
                    {msg.sender_id,
                     {MsgKind::ChainResponse, id(), ledger_.blocks}});
                break;
            case MsgKind::ChainResponse:
                handle_chain_response(std::get<std::vector<Block>>(msg.payload), r);
                break;
        }
        return r;
    }

  private:
    bool accept_tx(const FovTransaction& tx, StepResult& r) {
        ++validations_;
        if (TxVerdict v = verify_tx(tx, acl_); v != TxVerdict::Ok) {
            r.note("tx_dropped", std::string("cause=spoofed (") + tx_verdict_name(v) +
                                     ") robot=" + tx.robot_id);
            return false;
        }
        uint64_t floor_seq = 0;
        if (auto lv = latest_view(ledger_, tx.robot_id)) floor_seq = lv->seq;
        size_t pending = 0;
        for (const auto& m : mempool_) {
            if (m.robot_id != tx.robot_id) continue;
            ++pending;
            floor_seq = std::max(floor_seq, m.seq);
        }
        if (tx.seq <= floor_seq) {
            r.note("tx_dropped", "cause=stale-seq robot=" + tx.robot_id +
                                     " seq=" + std::to_string(tx.seq));
            return false;
        }
        if (pending >= params_.max_txs_per_robot_per_block) {
            r.note("tx_dropped", "cause=rate-limit robot=" + tx.robot_id);
            return false;
        }
        mempool_.push_back(tx);
        r.note("tx_accepted",
               "robot=" + tx.robot_id + " seq=" + std::to_string(tx.seq));
        return true;
    }

    void handle_submit(const FovTransaction& tx, uint64_t now_us, StepResult& r) {
        record_receipt(tx_digest(tx), tx.robot_id, now_us);
        accept_tx(tx, r);
    }

    // Proof of delivery for the transmitting robot; one receipt per message
    // digest per receiver.
    void record_receipt(const Digest& digest, const std::string& sender,
                        uint64_t now_us) {
        if (sender == id()) return;
        if (!receipt_digests_.insert(digest).second) return;
        audit_log_.push_back(issue_receipt(identity_, digest, sender, now_us));
    }

    // Up to max_txs_per_robot_per_block per robot, in arrival order, skipping
    // anything already committed.
    std::vector<FovTransaction> drain_mempool() {
        std::vector<FovTransaction> out;
        std::map<std::string, uint64_t> floor_seq = ledger_.committed_seqs();
        std::map<std::string, uint32_t> taken;
        for (const auto& tx : mempool_) {
            auto fit = floor_seq.find(tx.robot_id);
            if (fit != floor_seq.end() && tx.seq <= fit->second) continue;
            if (taken[tx.robot_id] >= params_.max_txs_per_robot_per_block) continue;
            ++taken[tx.robot_id];
            floor_seq[tx.robot_id] = tx.seq;
            out.push_back(tx);
        }
        return out;
    }

    void handle_proposal(const Block& block, const std::string& sender,
                         uint64_t now_us, StepResult& r) {
        for (const auto& tx : block.txs) record_receipt(tx_digest(tx), tx.robot_id, now_us);

        Digest h = block_hash(block.header);
        if (validated_.count(h) || committed_hashes_.count(h)) return;

        if (block.header.prev_hash != block_hash(ledger_.tip())) {
            if (block.header.index > ledger_.height() + 1) {
                r.note("chain_request",
                       "proposal height " + std::to_string(block.header.index) +
                           " ahead of local " + std::to_string(ledger_.height()));
                r.out.push_back({sender, {MsgKind::ChainRequest, id(),
                                          ChainRequestPayload{}}});
            } else {
                r.note("proposal_ignored", "extends a stale parent");
            }
            return;
        }

        if (block.header.difficulty != params_.difficulty) {
            r.note("proposal_rejected", "difficulty mismatch");
            return;
        }
        ++validations_;
        Verdict v = verify_block(block, ledger_.tip(), acl_, ledger_.committed_seqs());
        if (!v.ok) {
            r.note("proposal_rejected", v.reason);
            return;
        }
        pending_blocks_[h] = block;
        validated_.insert(h);
        phase_ = Phase::Proposed;
        cast_vote(h, block.header.prev_hash, r);
        try_commit(h, r);
    }

    // At most one vote per parent tip, so two same-height proposals split
    // honest votes instead of double-committing. Observers never vote.
    void cast_vote(const Digest& block_h, const Digest& parent_h, StepResult& r) {
        if (!acl_.is_member(id())) return;
        if (!voted_parents_.insert(parent_h).second) return;
        VotePayload vote = make_vote(identity_, MsgKind::Vote, block_h);
        pending_votes_[block_h].insert(id());
        r.note("vote", "block=" + to_hex(block_h).substr(0, 12));
        r.out.push_back({std::nullopt, {MsgKind::Vote, id(), vote}});
    }

    void handle_vote(const VotePayload& vote, MsgKind kind, const std::string& sender,
                     StepResult& r) {
        if (!verify_vote(vote, kind, acl_)) {
            r.note("vote_rejected", "bad signature or not a member: " + vote.voter_id);
            return;
        }
        if (committed_hashes_.count(vote.block_hash)) return;
        pending_votes_[vote.block_hash].insert(vote.voter_id);
        if (kind == MsgKind::Commit && !validated_.count(vote.block_hash)) {
            // Someone committed a block we have never seen; catch up.
            r.note("chain_request", "commit for unknown block from " + sender);
            r.out.push_back({sender, {MsgKind::ChainRequest, id(),
                                      ChainRequestPayload{}}});
            return;
        }
        try_commit(vote.block_hash, r);
    }

    void try_commit(const Digest& h, StepResult& r) {
        auto bit = pending_blocks_.find(h);
        if (bit == pending_blocks_.end() || !validated_.count(h)) return;
        if (bit->second.header.prev_hash != block_hash(ledger_.tip())) return;
        auto vit = pending_votes_.find(h);
        size_t votes = vit == pending_votes_.end() ? 0 : vit->second.size();
        if (votes < params_.required_votes(members_.size())) return;

        phase_ = Phase::Committing;
        Block block = bit->second;
        apply_block(ledger_, block);
        committed_hashes_.insert(h);
        prune_mempool();
        pending_blocks_.erase(h);
        pending_votes_.erase(h);
        round_ += 1;
        phase_ = Phase::Idle;
        r.note("commit", "height=" + std::to_string(block.header.index) +
                             " txs=" + std::to_string(block.txs.size()) +
                             " votes=" + std::to_string(votes));
        r.out.push_back({std::nullopt,
                         {MsgKind::Commit, id(),
                          make_vote(identity_, MsgKind::Commit, h)}});
    }

    void prune_mempool() {
        auto floor_seq = ledger_.committed_seqs();
        std::erase_if(mempool_, [&](const FovTransaction& tx) {
            auto it = floor_seq.find(tx.robot_id);
            return it != floor_seq.end() && tx.seq <= it->second;
        });
    }

    void handle_chain_response(const std::vector<Block>& chain, StepResult& r) {
        if (chain.empty() || chain[0] != ledger_.blocks[0]) {
            r.note("chain_ignored", "foreign or empty genesis");
            return;
        }
        for (size_t i = 1; i < chain.size(); ++i) {
            if (chain[i].header.difficulty != params_.difficulty) {
                r.note("chain_ignored", "difficulty mismatch at index " +
                                            std::to_string(i));
                return;
            }
        }
        ++validations_;
        if (!verify_chain(chain, acl_).ok) {
            r.note("chain_ignored", "failed validation");
            return;
        }
        const auto& winner = fork_choice(ledger_.blocks, chain, acl_);
        if (&winner != &chain) {
            r.note("chain_kept", "local chain wins fork choice");
            return;
        }
        adopt_chain(chain, r);
    }

    void adopt_chain(const std::vector<Block>& chain, StepResult& r) {
        const uint64_t old_height = ledger_.height();
        std::set<Digest> new_digests;
        for (const auto& b : chain)
            for (const auto& tx : b.txs) new_digests.insert(tx_digest(tx));

        std::vector<FovTransaction> orphaned;
        for (const auto& b : ledger_.blocks)
            for (const auto& tx : b.txs)
                if (!new_digests.count(tx_digest(tx))) orphaned.push_back(tx);

        ledger_ = ledger_from_chain(chain, acl_);
        committed_hashes_.clear();
        for (const auto& b : ledger_.blocks)
            committed_hashes_.insert(block_hash(b.header));

        // Re-queue orphaned local txs that are still fresh under the winner.
        auto floor_seq = ledger_.committed_seqs();
        for (auto& tx : orphaned) {
            auto it = floor_seq.find(tx.robot_id);
            if (it != floor_seq.end() && tx.seq <= it->second) continue;
            mempool_.push_back(tx);
        }
        prune_mempool();
        if (ledger_.height() > old_height) round_ += ledger_.height() - old_height;
        phase_ = Phase::Idle;
        r.note("chain_adopted", "height " + std::to_string(old_height) + " -> " +
                                    std::to_string(ledger_.height()) + ", requeued " +
                                    std::to_string(orphaned.size()) + " txs");
    }

    RobotIdentity identity_;
    Acl acl_;
    ConsensusParams params_;
    LedgerState ledger_;
    std::vector<std::string> members_;

    std::vector<FovTransaction> mempool_;  // arrival order
    uint64_t round_ = 0;
    uint64_t proposed_round_ = static_cast<uint64_t>(-1);
    Phase phase_ = Phase::Idle;

    std::map<Digest, Block> pending_blocks_;
    std::set<Digest> validated_;
    std::map<Digest, std::set<std::string>> pending_votes_;
    std::set<Digest> voted_parents_;
    std::set<Digest> committed_hashes_;

    std::vector<DeliveryReceipt> audit_log_;
    std::set<Digest> receipt_digests_;
    uint64_t validations_ = 0;
};

}  // namespace bcvh
