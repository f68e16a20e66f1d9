"""FDR Graph - 의존성 그래프 하의 다중검정 절차 (IndBH, IndBH^(k), SU)"""
