"""
고속 엔진 벤치마크

블록 가우시안 시나리오 (기본 m=10^6, 비귀무 1%, b=100)에서 IndBH와
IndBH^(k)의 실행 시간을 재고, 스레드 수에 따라 결과가 같은지 확인한다.
"""

import logging
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from tqdm import tqdm

from src.config import app_config as config
from src.services.engine import run_indbh_k
from src.services.simulation import SimScenario, generate

logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s - %(levelname)s - %(message)s"
)
logger = logging.getLogger(__name__)


def main():
    """메인 함수"""
    import argparse

    parser = argparse.ArgumentParser(description="IndBH 고속 엔진 벤치마크")
    parser.add_argument("--m", type=int, default=1_000_000, help="가설 수")
    parser.add_argument("--block", type=int, default=100, help="블록 크기")
    parser.add_argument("--rho", type=float, default=0.5, help="블록 내 상관")
    parser.add_argument("--pi0", type=float, default=0.99, help="귀무가설 비율")
    parser.add_argument("--mu-star", type=float, default=4.0, help="신호 크기")
    parser.add_argument("--alpha", type=float, default=config.DEFAULT_ALPHA, help="유의수준")
    parser.add_argument("--k", type=int, nargs="+", default=[1, 3], help="측정할 k 목록")
    parser.add_argument("--threads", type=int, nargs="+", default=[1, 8], help="비교할 스레드 수")
    parser.add_argument("--seed", type=int, default=0, help="난수 시드")
    args = parser.parse_args()

    scenario = SimScenario(
        m=args.m,
        dependence="block",
        block_size=args.block,
        rho=args.rho,
        pi0=args.pi0,
        mu_star=args.mu_star,
        alpha=args.alpha,
    )
    logger.info(f"🎲 데이터 생성: m={args.m}, b={args.block}, π_0={args.pi0}")
    draw = generate(scenario, args.seed)

    failed = False
    for k in args.k:
        results = {}
        for threads in tqdm(args.threads, desc=f"k={k}"):
            started = time.perf_counter()
            run = run_indbh_k(draw.p, args.alpha, draw.graph, k, threads=threads)
            elapsed = time.perf_counter() - started
            results[threads] = run.rejections
            logger.info(
                f"⏱️ k={k}, threads={threads}: {elapsed:.2f}s, 기각 {len(run.rejections)}개 "
                f"(kept={run.stats.kept}, 정확계산={run.stats.exact_calls}, 재귀={run.stats.recursive_calls})"
            )
        if len(set(results.values())) > 1:
            logger.error(f"❌ k={k}: 스레드 수에 따라 결과가 다릅니다")
            failed = True
        else:
            logger.info(f"✅ k={k}: 스레드 수와 무관하게 동일")

    if failed:
        sys.exit(1)


if __name__ == "__main__":
    main()
