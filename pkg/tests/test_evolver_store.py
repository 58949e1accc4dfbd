"""Versioned profile store: init, the one-segment-delta commit rule, and
revision history round-trips."""

import pytest

from charlogic.evolver.store import Revision, VersionStore, list_characters

S0 = 'when scene:\n    trigger "Nia waves."\n'
S1 = ('when scene:\n'
      '    if check("Is Nia indoors?"):\n'
      '        trigger "Nia takes off her boots."\n')
S1_V1 = ('when scene:\n'
         '    if check("Is Nia indoors?"):\n'
         '        trigger "Nia takes off her boots at the mat."\n')

SOURCES = {"s0": S0, "s1": S1}
ORDER = ["s0", "s1"]


def fresh_store(tmp_path, extra=None):
    return VersionStore.init(tmp_path, "Nia", SOURCES, ORDER,
                             manifest_extra=extra)


def revision_for(store, new_source, segment="s1", issue="contradicted"):
    return Revision(
        version=store.latest_version + 1,
        scene_id="sc-9",
        blamed_segment=segment,
        issue=issue,
        old_source=store.sources()[segment],
        new_source=new_source,
        rationale="boots detail was wrong",
    )


# --- init -------------------------------------------------------------------

def test_init_writes_v0(tmp_path):
    store = fresh_store(tmp_path)
    assert store.versions == [0]
    assert store.latest_version == 0
    assert store.sources() == SOURCES
    assert (tmp_path / "Nia" / "v0" / "manifest.json").exists()


def test_init_manifest_carries_order_and_extras(tmp_path):
    store = fresh_store(tmp_path, extra={"granularity": "paragraph",
                                         "model": "mock"})
    assert store.segment_order == ORDER
    assert store.manifest["character"] == "Nia"
    assert store.manifest["granularity"] == "paragraph"


def test_init_rejects_unparseable_source(tmp_path):
    with pytest.raises(ValueError):
        VersionStore.init(tmp_path, "Nia", {"s0": "when scene\n"}, ["s0"])


def test_init_rejects_order_source_mismatch(tmp_path):
    with pytest.raises(ValueError):
        VersionStore.init(tmp_path, "Nia", SOURCES, ["s0"])


def test_open_missing_character_fails(tmp_path):
    with pytest.raises(FileNotFoundError):
        VersionStore(tmp_path, "Ghost")


def test_stored_files_end_with_single_newline(tmp_path):
    VersionStore.init(tmp_path, "Nia",
                      {"s0": S0.rstrip("\n")}, ["s0"])
    raw = (tmp_path / "Nia" / "v0" / "s0.cpl").read_bytes()
    assert raw.endswith(b'"\n') and not raw.endswith(b"\n\n")
    assert b"\r" not in raw


# --- commit -------------------------------------------------------------------

def test_commit_creates_next_version_with_one_delta(tmp_path):
    store = fresh_store(tmp_path)
    new_version = store.commit(revision_for(store, S1_V1))
    assert new_version == 1
    assert store.versions == [0, 1]
    before, after = store.sources(0), store.sources(1)
    changed = [k for k in ORDER if before[k] != after[k]]
    assert changed == ["s1"]
    assert after["s1"] == S1_V1
    assert after["s0"] == S0


def test_commit_rejects_stale_old_source(tmp_path):
    store = fresh_store(tmp_path)
    stale = Revision(1, "sc-9", "s1", "neutral",
                     old_source="something else", new_source=S1_V1,
                     rationale="")
    with pytest.raises(ValueError):
        store.commit(stale)


def test_commit_rejects_unknown_segment(tmp_path):
    store = fresh_store(tmp_path)
    rev = Revision(1, "sc-9", "s7", "neutral", old_source=S1,
                   new_source=S1_V1, rationale="")
    with pytest.raises(KeyError):
        store.commit(rev)


def test_commit_rejects_unparseable_new_source(tmp_path):
    store = fresh_store(tmp_path)
    with pytest.raises(ValueError):
        store.commit(revision_for(store, "when scene:\n"))


def test_commit_rejects_wrong_version_number(tmp_path):
    store = fresh_store(tmp_path)
    rev = revision_for(store, S1_V1)
    bad = Revision(5, rev.scene_id, rev.blamed_segment, rev.issue,
                   rev.old_source, rev.new_source, rev.rationale)
    with pytest.raises(ValueError):
        store.commit(bad)


def test_programs_parse_at_every_version(tmp_path):
    store = fresh_store(tmp_path)
    store.commit(revision_for(store, S1_V1))
    for version in store.versions:
        programs = store.programs(version)
        assert [p.segment_id for p in programs] == ORDER


def test_unknown_version_read_fails(tmp_path):
    store = fresh_store(tmp_path)
    with pytest.raises(FileNotFoundError):
        store.sources(3)


# --- revision history -----------------------------------------------------------

def test_revisions_round_trip(tmp_path):
    store = fresh_store(tmp_path)
    first = revision_for(store, S1_V1)
    store.commit(first)
    second = revision_for(store, S1, issue="neutral")
    store.commit(second)
    assert store.revisions() == [first, second]


def test_revisions_empty_before_any_commit(tmp_path):
    assert fresh_store(tmp_path).revisions() == []


def test_reopened_store_sees_committed_state(tmp_path):
    store = fresh_store(tmp_path)
    store.commit(revision_for(store, S1_V1))
    reopened = VersionStore(tmp_path, "Nia")
    assert reopened.latest_version == 1
    assert reopened.sources()["s1"] == S1_V1
    assert len(reopened.revisions()) == 1


# --- listing ----------------------------------------------------------------------

def test_list_characters(tmp_path):
    fresh_store(tmp_path)
    VersionStore.init(tmp_path, "Abel", {"s0": S0}, ["s0"])
    (tmp_path / "stray-dir").mkdir()
    assert list_characters(tmp_path) == ["Abel", "Nia"]


def test_list_characters_missing_root(tmp_path):
    assert list_characters(tmp_path / "nowhere") == []
