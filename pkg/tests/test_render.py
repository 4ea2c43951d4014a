import re

import pytest

from hypwalls.bianchi import f_infty, ring_ctx
from hypwalls.domains import DomainSpec, bianchi_domain, build_domain, enumerate_group, faces
from hypwalls.fixtures import figure_eight
from hypwalls.render import render_slice, write_slice


@pytest.fixture(scope="module")
def d1():
    dom = bianchi_domain(1, 20)
    return dom, faces(dom)


def _walls_in_header(svg):
    return int(re.search(r"walls: (\d+)", svg).group(1))


def test_d1_real_slice(d1):
    dom, fw = d1
    svg = render_slice(dom, "im", 0.0, walls=fw)
    assert "100 px per unit" in svg and "origin at the canvas centre" in svg
    size = float(re.search(r'width="([\d.]+)"', svg).group(1))
    c = size / 2
    # the unit hemisphere appears as a half circle of radius 100 px about the centre
    arc = f'd="M {c - 100:.3f} {c:.3f} A 100.000 100.000 0 0 1 {c + 100:.3f} {c:.3f}"'
    assert arc in svg
    for x in (c - 50, c + 50):
        assert f'<line class="wall" x1="{x:.3f}"' in svg
        assert f'<line class="f-infty" x1="{x:.3f}"' in svg
    assert 'class="domain"' in svg


def test_figure_eight_slice_matches_faces(tmp_path):
    spec = figure_eight()
    dom = build_domain(enumerate_group(spec, 3, 30), spec.stabilizer)
    fw = faces(dom)
    path = tmp_path / "f8.svg"
    write_slice(dom, path, "re", 0.0, walls=fw)
    svg = path.read_text()
    assert _walls_in_header(svg) == len(fw)
    assert svg.rstrip().endswith("</svg>")
    assert "Re z = 0.000" in svg


def test_empty_wall_list_draws_only_the_prism():
    poly = f_infty(ring_ctx(2))
    dom = DomainSpec(poly, [], [])
    svg = render_slice(dom, "im", 0.1)
    assert _walls_in_header(svg) == 0
    assert 'class="wall"' not in svg
    assert svg.count('class="f-infty"') == 2


def test_render_is_deterministic(d1):
    dom, fw = d1
    assert render_slice(dom, "re", 0.2, walls=fw) == render_slice(dom, "re", 0.2, walls=fw)


def test_render_validates_axis(d1):
    dom, _ = d1
    with pytest.raises(ValueError):
        render_slice(dom, "r", 0.0)


def test_write_slice_reports_bad_paths(d1, tmp_path):
    dom, _ = d1
    with pytest.raises(OSError):
        write_slice(dom, tmp_path / "missing" / "x.svg")
