"""Graph Builder: Compiles the experiment-cell LangGraph with all nodes and edges."""

from langgraph.graph import END, START, StateGraph

from src.voting.experiments.pipeline.edges.conditionals import abort_gate
from src.voting.experiments.pipeline.nodes.generate_graph import generate_graph_node
from src.voting.experiments.pipeline.nodes.hypothesis import hypothesis_node
from src.voting.experiments.pipeline.nodes.simulate import simulate_node
from src.voting.experiments.pipeline.nodes.spectrum import spectrum_node
from src.voting.experiments.pipeline.nodes.summarize import summarize_node
from src.voting.state.schemas import CellState
from src.voting.utils.logging_config import get_logger

logger = get_logger(__name__)


def build_cell_graph():
    """Build and compile the pipeline that runs one experiment cell.

    Returns:
        Compiled LangGraph application
    """
    logger.info("Building experiment cell graph...")

    graph = StateGraph(CellState)

    # Add nodes
    graph.add_node("generate", generate_graph_node)
    graph.add_node("spectrum", spectrum_node)
    graph.add_node("hypothesis", hypothesis_node)
    graph.add_node("simulate", simulate_node)
    graph.add_node("summarize", summarize_node)

    graph.add_edge(START, "generate")

    # Aborted cells still get a summary record
    graph.add_conditional_edges(
        "generate", abort_gate, {"continue": "spectrum", "abort": "summarize"}
    )
    graph.add_conditional_edges(
        "spectrum", abort_gate, {"continue": "hypothesis", "abort": "summarize"}
    )

    graph.add_edge("hypothesis", "simulate")
    graph.add_edge("simulate", "summarize")
    graph.add_edge("summarize", END)

    app = graph.compile()

    logger.info("Experiment cell graph compiled successfully")

    return app


# Global instance for import
cell_app = build_cell_graph()
