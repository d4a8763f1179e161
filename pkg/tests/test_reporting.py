"""Report schema: stable serialization and exit-code semantics."""

from fractions import Fraction

from radbound.reporting import (TARGET_SLACK, VerificationReport, emit_report,
                                parse_report)


def test_empty_campaign_roundtrip():
    rep = VerificationReport("EMPTY", config={"k": 1})
    back = parse_report(emit_report(rep))
    assert back.campaign == "EMPTY"
    assert back.items == [] and back.all_pass
    assert back.exit_code == 0


def test_single_failure_roundtrip():
    rep = VerificationReport("ONE")
    rep.check("too small", Fraction(1, 10), Fraction(1, 2))
    assert not rep.all_pass and rep.exit_code == 1
    back = parse_report(emit_report(rep))
    assert back.to_dict() == rep.to_dict()
    assert len(back.failing) == 1


def test_schema_echo():
    rep = VerificationReport("ECHO", config={"b": 2, "a": 1})
    rep.check("ok", 1.0, 0.5)
    rep.check_exact("eq", Fraction(1, 4), Fraction(1, 4))
    rep.record("flag", True, detail="noted")
    rep.note("a remark")
    d = rep.to_dict()
    assert list(d) == ["campaign", "config", "summary", "items", "notes"]
    assert list(d["config"]) == ["a", "b"]     # sorted, deterministic
    assert d["summary"]["total"] == 3 and d["summary"]["all_pass"]
    assert parse_report(emit_report(rep)).to_dict() == d


def test_slack_and_strictness():
    rep = VerificationReport("S")
    # exactly on target with default slack: strict check fails
    assert not rep.check("strict at target", 0.5, 0.5)
    # non-strict with negative slack admits the equality case
    assert rep.check("loose at target", 0.5, 0.5, strict=False,
                     slack=-TARGET_SLACK)
    assert rep.min_margin is not None


def test_text_format_mentions_failures():
    rep = VerificationReport("T")
    rep.check("must fail", 0.0, 1.0)
    text = emit_report(rep, "text")
    assert "FAIL" in text and "1 FAILED" in text
