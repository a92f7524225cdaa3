import numpy as np
import pytest

from contauth.errors import ValidationError
from contauth.features import MinuteFeatureVector
from contauth.pipeline import (
    FUSED_WIDTH,
    fuse_minute_vectors,
    fuse_timeline,
    fused_dataset,
    fused_feature_names,
)


def vec(user, minute, width, prefix, fill=1.0):
    return MinuteFeatureVector(
        user, "pc", minute, {f"{prefix}{j}": fill + j for j in range(width)}, f"{prefix}sel"
    )


def pc(user="u1", minute=0, fill=1.0):
    return vec(user, minute, 150, "p", fill)


def mapp(user="u1", minute=0, fill=2.0):
    return vec(user, minute, 50, "a", fill)


def sens(user="u1", minute=0, fill=3.0):
    return vec(user, minute, 40, "s", fill)


class TestFuseMinute:
    def test_pc_only_zero_fills_rest(self):
        f = fuse_minute_vectors(pc(), None, None)
        v = f.values()
        assert v.shape == (240,)
        assert np.all(v[:150] != 0)
        assert np.all(v[150:] == 0)
        assert f.active == {"pc": True, "mapp": False, "sens": False}

    def test_all_three_concatenate_in_order(self):
        f = fuse_minute_vectors(pc(), mapp(), sens())
        v = f.values()
        assert v[0] == 1.0
        assert v[150] == 2.0
        assert v[200] == 3.0
        assert len(v) == FUSED_WIDTH

    def test_all_absent_yields_none(self):
        assert fuse_minute_vectors(None, None, None) is None

    def test_mismatched_minute_rejected(self):
        with pytest.raises(ValidationError, match="minute"):
            fuse_minute_vectors(pc(minute=1), mapp(minute=2), None)

    def test_mismatched_user_rejected(self):
        with pytest.raises(ValidationError, match="user"):
            fuse_minute_vectors(pc(user="a"), mapp(user="b"), None)

    def test_wrong_width_rejected(self):
        bad = vec("u1", 0, 149, "p")
        with pytest.raises(ValidationError, match="149"):
            fuse_minute_vectors(bad, None, None)


class TestFuseTimeline:
    def test_union_of_active_minutes(self):
        rng = np.random.default_rng(0)
        minutes = 1000
        pc_on = set(int(m) for m in rng.choice(minutes, 300, replace=False))
        ma_on = set(int(m) for m in rng.choice(minutes, 250, replace=False))
        sn_on = set(int(m) for m in rng.choice(minutes, 200, replace=False))
        fused = fuse_timeline(
            [pc(minute=m) for m in sorted(pc_on)],
            [mapp(minute=m) for m in sorted(ma_on)],
            [sens(minute=m) for m in sorted(sn_on)],
        )
        assert len(fused) == len(pc_on | ma_on | sn_on)
        for f in fused:
            assert np.all(f.pc_block == 0) == (f.minute_index not in pc_on)
            assert np.all(f.mobile_app_block == 0) == (f.minute_index not in ma_on)
            assert np.all(f.sensor_block == 0) == (f.minute_index not in sn_on)

    def test_dataset_construction(self):
        fused = fuse_timeline([pc(minute=0)], [mapp(minute=0), mapp(minute=1)], [])
        names = fused_feature_names(
            [f"p{j}" for j in range(150)], [f"a{j}" for j in range(50)], [f"s{j}" for j in range(40)]
        )
        ds = fused_dataset(fused, [f"p{j}" for j in range(150)], [f"a{j}" for j in range(50)], [f"s{j}" for j in range(40)])
        assert ds.feature_names == names
        assert ds.n_rows == 2
        assert ds.provenance == ["pc+mapp", "mapp"]
