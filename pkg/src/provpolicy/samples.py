"""Built-in example graphs, category dictionary, and policy.

Three variants of an assignment-handling workflow (upload, replace,
submit, then review and grading) at increasing size. They back the test
suite and give the command line something to chew on out of the box.
"""

from __future__ import annotations

from .graph import Edge, EdgeLabel, ProvenanceGraph, Vertex, VertexType
from .policy import (
    CategoryDictionary,
    EdgeMergeTable,
    Policy,
    parse_policy,
    parse_vcd,
)

_AG = VertexType.AGENT
_A = VertexType.ARTIFACT
_P = VertexType.PROCESS
_ATT = VertexType.ATTRIBUTE

_U = EdgeLabel.USED
_WGB = EdgeLabel.WAS_GENERATED_BY
_WCB = EdgeLabel.WAS_CONTROLLED_BY
_WTB = EdgeLabel.WAS_TRIGGERED_BY
_WDF = EdgeLabel.WAS_DERIVED_FROM
_HA = EdgeLabel.HAS_ATTRIBUTES


def _v(vid: str, vtype: VertexType, name: str | None = None, value: str | None = None) -> Vertex:
    return Vertex(vid, vtype, vid if name is None else name, value)


def sample_graph_a() -> ProvenanceGraph:
    """One author uploads a document, replaces it, and submits the new
    version. Six vertices; the smallest graph with branching agent paths."""
    vertices = [
        _v("au1", _AG),
        _v("upload1", _P, "upload"),
        _v("replace1", _P, "replace"),
        _v("submit1", _P, "submit"),
        _v("o1v1", _A),
        _v("o1v2", _A),
    ]
    edges = [
        Edge("upload1", "au1", _WCB, "c"),
        Edge("o1v1", "upload1", _WGB, "g_upload"),
        Edge("replace1", "o1v1", _U, "u_input"),
        Edge("replace1", "au1", _WCB, "c"),
        Edge("o1v2", "replace1", _WGB, "g_replace"),
        Edge("submit1", "o1v2", _U, "u_input"),
        Edge("submit1", "au1", _WCB, "c"),
    ]
    return ProvenanceGraph("sample-a", vertices, edges)


def sample_graph_b() -> ProvenanceGraph:
    """Extends sample A: the submission is reviewed by a second agent and
    graded by a third, with attribute marks on the review process and the
    grade artifact."""
    a = sample_graph_a()
    vertices = list(a.vertices.values()) + [
        _v("au2", _AG),
        _v("au3", _AG),
        _v("review1", _P, "review"),
        _v("grade1", _P, "grade"),
        _v("o1v3", _A),
        _v("o2v1", _A),
        _v("o2v2", _A),
        _v("o4v1", _A),
        _v("att-review1", _ATT, "Attri", "Attri"),
        _v("att-o4v1", _ATT, "Attri", "Attri"),
    ]
    edges = list(a.edges) + [
        Edge("o1v3", "submit1", _WGB, "g_submit"),
        Edge("review1", "o1v3", _U, "u_input"),
        Edge("review1", "au2", _WCB, "c"),
        Edge("o2v1", "review1", _WGB, "g_review"),
        Edge("o2v2", "o2v1", _WDF),
        Edge("grade1", "o1v3", _U, "u_input"),
        Edge("grade1", "au3", _WCB, "c"),
        Edge("o4v1", "grade1", _WGB, "g_grade"),
        Edge("review1", "att-review1", _HA),
        Edge("o4v1", "att-o4v1", _HA),
    ]
    return ProvenanceGraph("sample-b", vertices, edges)


def sample_graph_c() -> ProvenanceGraph:
    """The full grading pipeline the built-in policy sanitizes: upload /
    replace / Submit / confirm, then a review and a dated grading step,
    and a final publish carried out by the system rather than an agent."""
    vertices = [
        _v("au1", _AG),
        _v("au2", _AG),
        _v("au3", _AG),
        _v("upload1", _P, "upload"),
        _v("replace1", _P, "replace"),
        _v("submit1", _P, "Submit"),
        _v("confirm1", _P, "confirm"),
        _v("review2", _P, "review"),
        _v("grade2", _P, "grade"),
        _v("publish1", _P, "publish"),
        _v("o1v1", _A),
        _v("o1v2", _A),
        _v("o1v3", _A),
        _v("o5v1", _A),
        _v("o3v1", _A),
        _v("o8v1", _A),
        _v("o9v1", _A),
        _v("att-grade2", _ATT, "gradedOn", "15/6/2016"),
    ]
    edges = [
        Edge("upload1", "au1", _WCB),
        Edge("o1v1", "upload1", _WGB),
        Edge("replace1", "o1v1", _U),
        Edge("replace1", "au1", _WCB),
        Edge("o1v2", "replace1", _WGB),
        Edge("submit1", "o1v2", _U),
        Edge("submit1", "au1", _WCB),
        Edge("o1v3", "submit1", _WGB),
        Edge("confirm1", "submit1", _WTB),
        Edge("o5v1", "confirm1", _WGB),
        Edge("review2", "o1v3", _U),
        Edge("review2", "au2", _WCB),
        Edge("o3v1", "review2", _WGB),
        Edge("grade2", "o3v1", _U),
        Edge("grade2", "au3", _WCB),
        Edge("o8v1", "grade2", _WGB),
        Edge("grade2", "att-grade2", _HA),
        Edge("publish1", "o8v1", _U),
        Edge("o9v1", "publish1", _WGB),
    ]
    return ProvenanceGraph("sample-c", vertices, edges)


SAMPLE_VCD_JSON = """\
{
  "categories": [
    {
      "name": "Grading",
      "label": "Graded",
      "replacement_type": "process",
      "members": ["TypedV_P(G, grade2)", "TypedV_A(G, o3v1|o8v1)"]
    },
    {
      "name": "Submission",
      "label": "Submitted",
      "replacement_type": "process",
      "members": ["TypedV_P(G, Submit|wasSubmittedBy|confirm)"]
    }
  ]
}
"""


def sample_vcd() -> CategoryDictionary:
    return parse_vcd(SAMPLE_VCD_JSON)


def sample_merge_table() -> EdgeMergeTable:
    return EdgeMergeTable.default()


# The transformation block of the built-in policy, kept in its original
# hand-written layout (note the prime marks, loose spacing, and the stray
# ">" the parser tolerates).
SAMPLE_TRANSFORMATION_BLOCK = """\
<Transformation>
<partition>
subgraphs (TypedV_A' (G_i, o3v1)//TypedV_A' (G_i, o8v1)>)
</partition>
<scope> original </scope>
<mode> replace </mode>
<label> false dependency </label>
<partition>
vertices (TypedV_P' (G_i, Submit|wasSubmittedBy))
</partition>
<scope> conjunction </scope>
<mode> remove </mode>
<label> original dependency </label>
</Transformation>"""


def sample_policy_xml() -> str:
    """A deny policy hiding sample C's grading region and submission
    steps from requesters who are not staff."""
    return (
        '<policy id="hide-grading">\n'
        "<target>\n"
        "<graph>sample-c</graph>\n"
        "</target>\n"
        "<condition>\n"
        '<requester name="role" op="!=">staff</requester>\n'
        "</condition>\n"
        "<effect>deny</effect>\n"
        "<obligation>log the request</obligation>\n"
        + SAMPLE_TRANSFORMATION_BLOCK
        + "\n</policy>\n"
    )


def sample_policy() -> Policy:
    return parse_policy(sample_policy_xml())
