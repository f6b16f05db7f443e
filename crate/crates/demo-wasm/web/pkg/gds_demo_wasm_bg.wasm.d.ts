/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_get_lambdapath_coefs: (a: number) => [number, number];
export const __wbg_get_lambdapath_l2_errors: (a: number) => [number, number];
export const __wbg_get_lambdapath_lambdas: (a: number) => [number, number];
export const __wbg_get_lambdapath_p: (a: number) => number;
export const __wbg_get_lambdapath_truth: (a: number) => [number, number];
export const __wbg_get_projection_beta: (a: number) => number;
export const __wbg_get_projection_input_norm: (a: number) => number;
export const __wbg_get_projection_r: (a: number) => number;
export const __wbg_get_projection_s: (a: number) => number;
export const __wbg_get_projection_w: (a: number) => [number, number];
export const __wbg_get_widthcurve_bounds: (a: number) => [number, number];
export const __wbg_get_widthcurve_estimates: (a: number) => [number, number];
export const __wbg_get_widthcurve_ks: (a: number) => [number, number];
export const __wbg_get_widthcurve_std_errors: (a: number) => [number, number];
export const __wbg_lambdapath_free: (a: number, b: number) => void;
export const __wbg_projection_free: (a: number, b: number) => void;
export const __wbg_set_lambdapath_coefs: (a: number, b: number, c: number) => void;
export const __wbg_set_lambdapath_l2_errors: (a: number, b: number, c: number) => void;
export const __wbg_set_lambdapath_lambdas: (a: number, b: number, c: number) => void;
export const __wbg_set_lambdapath_p: (a: number, b: number) => void;
export const __wbg_set_lambdapath_truth: (a: number, b: number, c: number) => void;
export const __wbg_set_projection_beta: (a: number, b: number) => void;
export const __wbg_set_projection_input_norm: (a: number, b: number) => void;
export const __wbg_set_projection_r: (a: number, b: number) => void;
export const __wbg_set_projection_s: (a: number, b: number) => void;
export const __wbg_set_projection_w: (a: number, b: number, c: number) => void;
export const __wbg_set_widthcurve_bounds: (a: number, b: number, c: number) => void;
export const __wbg_set_widthcurve_estimates: (a: number, b: number, c: number) => void;
export const __wbg_set_widthcurve_ks: (a: number, b: number, c: number) => void;
export const __wbg_set_widthcurve_std_errors: (a: number, b: number, c: number) => void;
export const __wbg_widthcurve_free: (a: number, b: number) => void;
export const lambdaPath: (a: number, b: number, c: number, d: number) => [number, number, number];
export const project: (a: number, b: number, c: number, d: number) => [number, number, number];
export const widthCurve: (a: number, b: number, c: number) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_start: () => void;
