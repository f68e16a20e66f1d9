"""명령줄 인터페이스: reject / simulate / bounds / oracle-check

종료 코드: 0 성공, 1 오라클 실패 또는 예기치 못한 오류, 2 입력/파라미터 오류,
3 컴포넌트 크기 가드 초과. 결과는 stdout, 로그와 요약은 stderr로 나간다.
"""

import argparse
import json
import logging
import sys
import time
from typing import Optional, Sequence

from src.config import app_config as config
from src.infrastructure.files import (
    graph_from_spec,
    read_cover,
    read_edge_list,
    read_pvalues,
    summary_line,
    write_bounds,
    write_rejections,
)
from src.services.bounds import CliqueCover, summarize_bounds
from src.services.exceptions import GraphSizeError, InputError, ParameterError
from src.services.graph import DependencyGraph
from src.services.oracle import run_oracle_suite
from src.services.procedures import ProcedureKind, ProcedureSpec, bh
from src.services.procedures.registry import run_procedure
from src.services.simulation import load_scenario, simulate_metrics, write_metrics_csv

logger = logging.getLogger("src.cli")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT = 2
EXIT_GUARD = 3


def _add_graph_source(parser: argparse.ArgumentParser, required: bool = False) -> None:
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument("--graph", metavar="PATH", help="엣지 리스트 파일 (한 줄에 'i j')")
    group.add_argument("--block", type=int, metavar="B", help="크기 B의 연속 블록 (클리크)")
    group.add_argument("--banded", type=int, metavar="BW", help="대역폭 b′의 띠 그래프")
    group.add_argument("--empty", action="store_true", help="엣지 없는 그래프 (독립)")
    group.add_argument("--complete", action="store_true", help="완전 그래프")


def _load_graph(args: argparse.Namespace, m: int) -> Optional[DependencyGraph]:
    if args.graph:
        return read_edge_list(args.graph, m)
    if args.block is not None:
        return graph_from_spec("block", m, args.block)
    if args.banded is not None:
        return graph_from_spec("banded", m, args.banded)
    if args.empty:
        return graph_from_spec("empty", m)
    if args.complete:
        return graph_from_spec("complete", m)
    return None


def _check_method(spec: ProcedureSpec, unsafe: bool) -> None:
    kinds = {spec.kind, spec.inner.kind if spec.inner else None}
    if ProcedureKind.NAIVE in kinds:
        if not unsafe:
            raise ParameterError("naive 절차는 FDR을 보장하지 않습니다. 대조군으로 쓰려면 --unsafe를 지정하세요")
        logger.warning("⚠️ naive 절차는 FDR 보장이 없습니다 (대조군 전용)")
    if ProcedureKind.SU in kinds:
        logger.warning("⚠️ su는 정의식 참조 경로로 계산되어 m이 크면 느립니다")


def cmd_reject(args: argparse.Namespace) -> int:
    p = read_pvalues(args.pvalues)
    graph = _load_graph(args, p.size)
    spec = ProcedureSpec.from_method(args.method, args.alpha, inner=args.inner, reference=args.reference)
    _check_method(spec, args.unsafe)
    if spec.needs_graph and graph is None:
        raise InputError(f"{spec.label} 절차에는 --graph/--block/--banded/--empty/--complete 중 하나가 필요합니다")

    started = time.perf_counter()
    rejections = run_procedure(spec, p, graph, threads=args.threads, guard=args.guard, seed=args.seed)
    seconds = time.perf_counter() - started

    write_rejections(rejections, p, sys.stdout, args.format)
    n_bh = len(bh(p, args.alpha))
    print(summary_line(p.size, n_bh, len(rejections), seconds, spec.label), file=sys.stderr)
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario, m=args.m, alpha=args.alpha)
    methods = [
        ProcedureSpec.from_method(name, scenario.alpha, inner=args.inner)
        for name in args.methods.split(",") if name.strip()
    ]
    for spec in methods:
        _check_method(spec, args.unsafe)
    metrics = simulate_metrics(scenario, methods, args.reps, args.seed, args.threads)
    if args.output:
        with open(args.output, "w", newline="", encoding="utf-8") as f:
            write_metrics_csv(metrics, f)
        logger.info(f"💾 지표 저장: {args.output}")
    else:
        write_metrics_csv(metrics, sys.stdout)
    return EXIT_OK


def cmd_bounds(args: argparse.Namespace) -> int:
    graph = _load_graph(args, args.m)
    cover = CliqueCover.of(read_cover(args.cover), args.m, graph) if args.cover else None
    block_size = args.bygraph_block or args.block
    result = summarize_bounds(graph, args.alpha, cover, block_size)
    if result.upper > 1.0:
        logger.warning(f"⚠️ 상한 {result.upper:.4g} > 1: 이 그래프에서는 무의미한 한계입니다")
    write_bounds(result, sys.stdout, args.format)
    return EXIT_OK


def cmd_oracle_check(args: argparse.Namespace) -> int:
    densities = [float(d) for d in args.densities.split(",") if d.strip()]
    if any(not 0.0 <= d <= 1.0 for d in densities):
        raise ParameterError(f"밀도는 [0, 1] 범위여야 합니다: {args.densities}")
    report = run_oracle_suite(args.trials, m_max=args.max_m, seed=args.seed, densities=densities)
    if args.format == "json":
        json.dump(report.model_dump(exclude={"seconds"}), sys.stdout, sort_keys=True)
        sys.stdout.write("\n")
    else:
        sys.stdout.write("check\truns\tstatus\n")
        failed = {f.check for f in report.failures}
        for name in sorted(report.checks):
            sys.stdout.write(f"{name}\t{report.checks[name]}\t{'FAIL' if name in failed else 'ok'}\n")
        for failure in report.failures:
            sys.stdout.write(
                f"# witness {failure.check}: alpha={failure.alpha} p={failure.pvalues} edges={failure.edges} {failure.detail}\n"
            )
    return EXIT_OK if report.passed else EXIT_FAILURE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fdrgraph", description="의존성 그래프 하의 FDR 다중검정 도구")
    parser.add_argument("-v", "--verbose", action="store_true", help="디버그 로그 출력")
    sub = parser.add_subparsers(dest="command", required=True)

    reject = sub.add_parser("reject", help="p-value 파일에 절차 적용")
    reject.add_argument("pvalues", help="p-value 파일 (값 또는 id<TAB>값)")
    reject.add_argument("--method", default="indbh", help="bh, sdbh, bonf, by, ebh, naive, indbh, indbh2, indbh3, indbhk=K, su, randprune, bygraph=B")
    reject.add_argument("--inner", default=None, help="randprune의 내부 절차 (기본 indbh)")
    reject.add_argument("--alpha", type=float, default=config.DEFAULT_ALPHA, help="유의수준")
    reject.add_argument("--seed", type=int, default=None, help="randprune 난수 시드")
    reject.add_argument("--threads", type=int, default=config.ENGINE_THREADS, help="엔진 스레드 수")
    reject.add_argument("--guard", type=int, default=None, help="컴포넌트 열거 가드 (노드 수)")
    reject.add_argument("--reference", action="store_true", help="정의식 참조 구현 사용")
    reject.add_argument("--unsafe", action="store_true", help="naive 대조군 허용")
    reject.add_argument("--format", choices=("tsv", "json"), default="tsv")
    _add_graph_source(reject)
    reject.set_defaults(handler=cmd_reject)

    simulate = sub.add_parser("simulate", help="시나리오 파일로 몬테카를로 실험")
    simulate.add_argument("scenario", help="key=value 시나리오 파일")
    simulate.add_argument("--methods", default="bh,indbh", help="쉼표로 구분한 절차 목록")
    simulate.add_argument("--inner", default=None, help="randprune의 내부 절차")
    simulate.add_argument("--reps", type=int, default=200, help="반복 수")
    simulate.add_argument("--seed", type=int, default=0, help="난수 시드")
    simulate.add_argument("--threads", type=int, default=config.ENGINE_THREADS, help="반복 병렬 스레드 수")
    simulate.add_argument("--m", type=int, default=None, help="시나리오의 m 덮어쓰기")
    simulate.add_argument("--alpha", type=float, default=None, help="시나리오의 alpha 덮어쓰기")
    simulate.add_argument("--unsafe", action="store_true", help="naive 대조군 허용")
    simulate.add_argument("--output", default=None, help="CSV 출력 경로 (기본 stdout)")
    simulate.set_defaults(handler=cmd_simulate)

    bounds = sub.add_parser("bounds", help="BH 최악 FDR 한계와 보정 수준")
    bounds.add_argument("--m", type=int, required=True, help="가설 수")
    bounds.add_argument("--alpha", type=float, default=config.DEFAULT_ALPHA, help="유의수준")
    bounds.add_argument("--cover", default=None, help="클리크 커버 파일 (한 줄에 블록 하나)")
    bounds.add_argument("--bygraph-block", type=int, default=None, help="BYgraph 수준을 계산할 블록 크기")
    bounds.add_argument("--format", choices=("tsv", "json"), default="tsv")
    _add_graph_source(bounds, required=True)
    bounds.set_defaults(handler=cmd_bounds)

    oracle = sub.add_parser("oracle-check", help="고속 엔진 대 전수 오라클 검사")
    oracle.add_argument("--trials", type=int, default=500, help="무작위 인스턴스 수")
    oracle.add_argument("--max-m", type=int, default=10, help="최대 가설 수")
    oracle.add_argument("--densities", default="0.1,0.3,0.6", help="Erdős–Rényi 엣지 확률 목록")
    oracle.add_argument("--seed", type=int, default=0, help="난수 시드")
    oracle.add_argument("--format", choices=("tsv", "json"), default="tsv")
    oracle.set_defaults(handler=cmd_oracle_check)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format=config.LOG_FORMAT,
        stream=sys.stderr,
    )
    try:
        return args.handler(args)
    except (InputError, ParameterError) as e:
        logger.error(f"❌ {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except GraphSizeError as e:
        logger.error(f"❌ {e}")
        print(f"error: component {e.component_id}: {e}", file=sys.stderr)
        return EXIT_GUARD
    except Exception as e:
        logger.exception(f"❌ 예기치 못한 오류: {e}")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
