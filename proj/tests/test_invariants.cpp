#include <gtest/gtest.h>

#include "jsnap/aux_ops.hpp"
#include "jsnap/invariants.hpp"
#include "support.hpp"

namespace jsnap {
namespace {

using testing::ts;
using testing::ts_of;

// Initial state plus terminated init-owned writes appended to sigma.
AuxState with_writes(std::vector<std::pair<WriteRecord, Color>> writes) {
  AuxState aux = AuxState::initial(5, 0);
  std::uint32_t t = 3;
  for (const auto& [rec, color] : writes) {
    aux.hist.insert(ts(t), {rec, Owner::init()});
    aux.sigma.push_back(ts(t));
    aux.kappa.insert(ts(t), color);
    aux.tau.insert(ts(t), ts(t));
    ++t;
  }
  return aux;
}

PhysState phys_of(const AuxState& aux) {
  PhysState p;
  for (const Timestamp t : aux.sigma) p.cell(aux.entry(t).rec.ptr) = aux.entry(t).rec.val;
  return p;
}

TEST(CheckState, InitialStateIsClean) {
  const Machine m = init(5, 0);
  EXPECT_TRUE(check_state(m.phys, m.aux).empty());
  EXPECT_TRUE(check_all(m.phys, m.aux).empty());
}

TEST(CheckState, ColorsPatternViolation) {
  const AuxState aux =
      with_writes({{{Ptr::X, 2}, Color::Red}, {{Ptr::X, 3}, Color::Yellow}});
  const ViolationReport rep = check_state(phys_of(aux), aux);
  EXPECT_TRUE(rep.contains("colors")) << rep.render();
}

TEST(CheckState, OverlapViolation) {
  AuxState aux = with_writes({{{Ptr::Y, 1}, Color::Green}});
  aux.sigma = {ts(1), ts(3), ts(2)};
  const ViolationReport rep = check_state(phys_of(aux), aux);
  EXPECT_TRUE(rep.contains("overlap")) << rep.render();
}

TEST(CheckState, LastWriteViolation) {
  const Machine m = init(5, 0);
  PhysState p = m.phys;
  p.x = 6;
  EXPECT_TRUE(check_state(p, m.aux).contains("last-write"));
}

TEST(CheckState, StructuralDamageIsReportedNotThrown) {
  AuxState aux = AuxState::initial(5, 0);
  aux.sigma.push_back(ts(9));
  ViolationReport rep;
  EXPECT_NO_THROW(rep = check_all(phys_of(AuxState::initial(5, 0)), aux));
  EXPECT_TRUE(rep.contains("sigma-permutation"));
  aux = AuxState::initial(5, 0);
  aux.kappa.erase(ts(2));
  EXPECT_TRUE(check_all(init(5, 0).phys, aux).contains("kappa-domain"));
}

TEST(CheckState, CleanAlongRandomWalks) {
  for (const auto& v : testing::random_states(13, 80)) {
    const ViolationReport rep = check_all(v.phys, v.aux);
    ASSERT_TRUE(rep.empty()) << rep.render();
  }
}

TEST(Render, LineFormat) {
  ViolationReport rep;
  rep.add("colors", "bad");
  rep.set_step(4);
  EXPECT_EQ(rep.render(), "INV colors @step=4: bad\n");
}

TEST(CheckTransition, RegisterGrowsHistoryByOne) {
  const AuxState pre = AuxState::initial(5, 0);
  const AuxState post = register_write(Ptr::X, 2, pre).aux;
  EXPECT_EQ(post.hist.size(), pre.hist.size() + 1);
  EXPECT_TRUE(check_transition(pre, post).empty());
}

TEST(CheckTransition, ShrinkingHistoryIsCaught) {
  const AuxState big = finalize(0, Ptr::X, check(Ptr::X, false,
                                                 register_write(Ptr::X, 2, AuxState::initial(5, 0)).aux));
  const ViolationReport rep = check_transition(big, AuxState::initial(5, 0));
  EXPECT_TRUE(rep.contains("hist-grows")) << rep.render();
}

TEST(CheckTransition, ReorderingAScannedEventIsCaught) {
  const AuxState pre = testing::fig1_prefix(20).aux();
  AuxState post = pre;
  std::swap(post.sigma[2], post.sigma[3]);
  EXPECT_FALSE(check_transition(pre, post).empty());
}

TEST(CheckTransition, FinalizeNeverShrinksScanned) {
  AuxState a = register_write(Ptr::X, 2, AuxState::initial(5, 0)).aux;
  a = check(Ptr::X, false, a);
  const AuxState b = finalize(0, Ptr::X, a);
  EXPECT_TRUE(set_includes(scanned(b), scanned(a)));
  EXPECT_TRUE(check_transition(a, b).empty());
}

TEST(CheckOmega, DamagedOrderFailsTheSuite) {
  const AuxState ok = testing::fig1_prefix(20).aux();
  EXPECT_TRUE(check_omega(ok).empty());
  AuxState bad = ok;
  bad.sigma = {ts(1), ts(2), ts(4), ts(3), ts(5)};
  bad.kappa.insert_or_assign(ts(4), Color::Green);
  bad.tau.insert_or_assign(ts(3), ts(3));
  const ViolationReport rep = check_all(phys_of(bad), bad);
  EXPECT_FALSE(rep.empty());
}

TEST(ChainLemma, InitialAndAfterRelink) {
  EXPECT_TRUE(check_chain_lemma(AuxState::initial(5, 0)).empty());
  const AuxState aux = testing::fig1_prefix(20).aux();
  EXPECT_TRUE(check_chain_lemma(aux).empty());
  const Timestamp one = ts_of(aux, Ptr::Y, 1);
  EXPECT_EQ(omega_down(one, aux, false), OmegaView(aux).sigma_prefix(one));
}

TEST(ChainLemma, RedEventIsExempt) {
  const AuxState aux = register_write(Ptr::X, 2, AuxState::initial(5, 0)).aux;
  EXPECT_TRUE(check_chain_lemma(aux).empty());
}

TEST(WritePost, UncontendedWrite) {
  const AuxState pre = AuxState::initial(5, 0);
  const SpecSnapshot snap = SpecSnapshot::capture(pre, 0);
  AuxState a = register_write(Ptr::X, 2, pre).aux;
  a = finalize(0, Ptr::X, check(Ptr::X, false, a));
  EXPECT_TRUE(check_write_post(snap, a, ts(3), 0, Ptr::X, 2).empty());
  EXPECT_TRUE(omega_leq(ts(1), ts(3), a) && omega_leq(ts(2), ts(3), a));
}

TEST(WritePost, SequentialWritesChain) {
  AuxState a = AuxState::initial(5, 0);
  a = finalize(0, Ptr::X, check(Ptr::X, false, register_write(Ptr::X, 2, a).aux));
  const SpecSnapshot snap = SpecSnapshot::capture(a, 0);
  a = finalize(0, Ptr::Y, check(Ptr::Y, false, register_write(Ptr::Y, 1, a).aux));
  EXPECT_TRUE(check_write_post(snap, a, ts(4), 0, Ptr::Y, 1).empty());
  EXPECT_TRUE(omega_leq(ts(3), ts(4), a));
  EXPECT_FALSE(omega_leq(ts(4), ts(3), a));
}

TEST(WritePost, FaultInjectionIsDetected) {
  const AuxState pre = AuxState::initial(5, 0);
  AuxState a = register_write(Ptr::X, 2, pre).aux;
  a = finalize(0, Ptr::X, check(Ptr::X, false, a));
  SpecSnapshot stale = SpecSnapshot::capture(a, 0);  // taken after the write
  const ViolationReport rep = check_write_post(stale, a, ts(3), 0, Ptr::X, 2);
  EXPECT_TRUE(rep.contains("write-post-fresh"));

  const SpecSnapshot snap = SpecSnapshot::capture(pre, 0);
  EXPECT_TRUE(check_write_post(snap, a, ts(3), 0, Ptr::X, 4).contains("write-post-self"));
  EXPECT_TRUE(check_write_post(snap, a, ts(3), 1, Ptr::X, 2).contains("write-post-self"));
}

TEST(ScanPost, DemoWitnessIsTheRelinkedOne) {
  const Execution ex = testing::fig1_prefix(20);
  const MethodRecord* scan = nullptr;
  for (const MethodRecord& m : ex.methods()) {
    if (!m.call.is_write()) scan = &m;
  }
  ASSERT_NE(scan, nullptr);
  EXPECT_EQ(scan->witness, ts_of(ex.aux(), Ptr::Y, 1));
}

TEST(ScanPost, UncontendedScanWitnessesTheInitialState) {
  const SpecSnapshot snap = SpecSnapshot::capture(AuxState::initial(5, 0), 0);
  const ScanPost post = check_scan_post(snap, AuxState::initial(5, 0), {5, 0}, ts(2));
  EXPECT_TRUE(post.report.empty());
  EXPECT_EQ(post.witness, ts(2));
  EXPECT_TRUE(check_scan_post(snap, AuxState::initial(5, 0), {5, 1}).report.contains(
      "scan-post-witness"));
  EXPECT_TRUE(check_scan_post(snap, AuxState::initial(5, 0), {5, 0}, ts(1)).report.contains(
      "scan-post-constructive"));
}

TEST(RelinkProperty, DetectsANonGreenPrefix) {
  const AuxState aux = testing::fig2a_state();
  const ViolationReport rep =
      check_relink_property(aux, ts_of(aux, Ptr::X, 2), ts_of(aux, Ptr::Y, 1));
  EXPECT_TRUE(rep.contains("relink-green-prefix"));
}

TEST(GreenYellowRead, OnlyLastGreenOrYellowMayBeRead) {
  AuxState on = clear(Ptr::X, set_scanner(true, AuxState::initial(5, 0)));
  EXPECT_TRUE(check_read(on, Ptr::X, 5).empty());
  EXPECT_TRUE(check_read(on, Ptr::X, 2).contains("green-yellow-read"));
  EXPECT_TRUE(check_read(AuxState::initial(5, 0), Ptr::X, 2).empty());  // guard off
}

}  // namespace
}  // namespace jsnap
