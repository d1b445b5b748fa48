"""Smoke test for the nearness_py extension.

Builds the cdylib with cargo, copies it next to a temporary module path and
exercises each class once. Run from anywhere: python3 python/smoke_test.py
"""

import importlib
import pathlib
import shutil
import subprocess
import sys
import sysconfig
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "crates" / "core" / "tests" / "fixtures"


def build_module(dest: pathlib.Path):
    subprocess.run(
        ["cargo", "build", "-p", "nearness-python", "--release", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    target = ROOT / "target" / "release"
    lib = next(p for p in (target / "libnearness_py.so", target / "libnearness_py.dylib") if p.exists())
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    shutil.copy(lib, dest / f"nearness_py{suffix}")
    sys.path.insert(0, str(dest))
    return importlib.import_module("nearness_py")


def main():
    with tempfile.TemporaryDirectory() as tmp:
        nm = build_module(pathlib.Path(tmp))

        # I1: antichain a, b with Θ = {{a, b}}
        i1 = nm.Instance(["a", "b"], [], [["a", "b"]])
        assert i1.spectrum() == [["a"], ["b"]], i1.spectrum()
        assert i1.is_near(["a"]) and not i1.is_near(["a", "b"])
        assert i1.near_witness(["a"]) == ["b"]
        assert ("a", "a") in i1.below()
        assert dict(i1.admissibility())["wallman"]
        assert all(kind != "fail" for _, kind, _ in i1.check())

        # I2: chain 0 < 1 with Θ = {{1}}
        i2 = nm.Instance.load(str(FIXTURES / "i2.json"))
        assert i2.spectrum() == [["1"]]
        assert i2.restriction(["1"]) == [["1"]]
        assert i2.regularise().theta == i2.regularise("stage-local").theta
        back = nm.Instance.from_json(i2.to_json())
        assert back.theta == i2.theta and back.elements == i2.elements

        # I3: a, b < 1 with Θ = {{a, b}}; the star of 1 is the whole cover
        i3 = nm.Instance(["a", "b", "1"], [("a", "1"), ("b", "1")], [["a", "b"]])
        assert i3.star(["a", "b"], "1") == ["a", "b"]
        assert len(i3.below()) == 5

        # I5: three points, pairs as subbasis
        i5 = nm.Space.load(str(FIXTURES / "i5.json"))
        assert i5.is_t1()
        assert len(i5.cover_instance().spectrum()) == 3
        assert all(kind != "fail" for _, kind, _ in i5.check(3))

        b4 = nm.Instance.load(str(FIXTURES / "boolean4.json"))
        frame = nm.Frame(b4)
        assert frame.heyting("a", "b") == "b"
        assert all(kind != "fail" for _, kind, _ in frame.check(b4))

        try:
            nm.Instance(["a", "b"], [("a", "b"), ("b", "a")], [])
        except nm.NearnessValueError as e:
            assert "a" in str(e)
        else:
            raise AssertionError("antisymmetry violation accepted")

        code, out, _ = nm.run_cli(["spectrum", str(FIXTURES / "i1.json")])
        assert code == 0 and "points: 2" in out, out

    print("smoke test passed")


if __name__ == "__main__":
    main()
