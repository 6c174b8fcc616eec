import pytest

from recipgamma.harness import presets
from recipgamma.harness.spec import ExperimentSpec
from recipgamma.utils.types import Method, ModelFamily


@pytest.mark.parametrize("name", sorted(presets.PRESETS))
def test_presets_are_valid_experiments(name):
    specs = presets.get_preset(name)
    assert specs
    for spec in specs:
        assert ExperimentSpec.from_dict(spec.to_dict()) == spec


def test_student_t_study_grid():
    specs = presets.student_t_study()
    assert len(specs) == 3 * 3 * 3 * 2
    assert {s.method for s in specs} == {Method.DA, Method.AMH}
    assert {s.data["n"] for s in specs} == {10, 30, 100}
    assert specs[0].scenario == "theta=3,tau=1,df=0.1"


def test_truncated_study_priors():
    lowers = {s.prior["alpha_lower"] for s in presets.student_t_truncated_study()}
    assert lowers == {0.5, 1.5}


def test_dir_mult_study_grid():
    specs = presets.dir_mult_study()
    assert len(specs) == 4 * 2 * 3
    assert all(s.model is ModelFamily.DIR_MULT for s in specs)
    assert {s.scenario for s in specs} == {"I", "II", "III", "IV"}


def test_gamma_study_labels():
    labels = [s.method_label for s in presets.gamma_study()]
    assert labels == ["da", "amh", "da_k1", "da_k3"]


def test_unknown_preset():
    with pytest.raises(ValueError):
        presets.get_preset("poisson")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__]))
